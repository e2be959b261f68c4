#ifndef PARIKH_TESTS_FIXTURES_HPP
#define PARIKH_TESTS_FIXTURES_HPP

#include "parikh/grammar.hpp"

namespace fixtures {

// S ->a S | S -> eps
inline parikh::Grammar ga() { return parikh::parse_grammar("alphabet: a\nstart: S\nS -> a : S\nS -> :\n"); }

// Psi = even multiples of a.
inline parikh::Grammar gb() {
  return parikh::parse_grammar("alphabet: a\nstart: S\nS -> a : T\nT -> a : S\nS -> :\n");
}

// S ->a S S | S -> eps
inline parikh::Grammar gc() { return parikh::parse_grammar("alphabet: a\nstart: S\nS -> a : S^2\nS -> :\n"); }

inline parikh::TermVector a(std::int64_t k) { return parikh::TermVector{k}; }

}  // namespace fixtures

#endif  // PARIKH_TESTS_FIXTURES_HPP
