#ifndef PARIKH_GRAMMAR_HPP
#define PARIKH_GRAMMAR_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "parikh/term_vector.hpp"

namespace parikh {

// q ->^{output} targets. Targets are nonterminal indices, sorted, with
// repetition encoding multiplicity (so targets.size() is |t|).
struct Transition {
  int source = 0;
  TermVector output;
  std::vector<int> targets;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/**
 * A commutative grammar over an ordered terminal alphabet.
 *
 * Transition ids are positions in `transitions`; the text form of id i is
 * `t<i+1>`. Nonterminal and terminal names share one namespace and must not
 * clash.
 */
struct Grammar {
  std::vector<std::string> alphabet;
  std::vector<std::string> nonterminals;
  int start = 0;
  std::vector<Transition> transitions;

  std::size_t num_terminals() const { return alphabet.size(); }
  std::size_t num_nonterminals() const { return nonterminals.size(); }
  int terminal_index(std::string_view name) const;
  int nonterminal_index(std::string_view name) const;
  // Adds a nonterminal if absent; returns its index.
  int intern_nonterminal(const std::string& name);

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

struct Classification {
  bool regular = false;
  bool normal_form = false;
  bool positive = false;
};

// Throws PreconditionError when an invariant of Grammar does not hold.
void validate(const Grammar& g);

Grammar parse_grammar(std::string_view text);
std::string serialize_grammar(const Grammar& g);

// Monomial syntax `a^3 b^-2`; the single token `0` or the empty string is the
// zero vector. Throws ParseError on unknown terminals.
TermVector parse_monomial(std::string_view text, const std::vector<std::string>& alphabet);
// Inverse of parse_monomial; the zero vector prints as `0`.
std::string format_monomial(const TermVector& v, const std::vector<std::string>& alphabet);
std::string transition_label(std::size_t id);

Classification classify(const Grammar& g);
Grammar normalize(const Grammar& g);
Grammar negate_grammar(const Grammar& g);
// Both inputs must be regular; Psi(result) = Psi(g1) - Psi(g2).
Grammar difference_grammar(const Grammar& g1, const Grammar& g2);

// `base__k` with the smallest k >= 1 not in `taken` (nonterminals or terminals).
std::string fresh_name(const std::string& base, const Grammar& g);

}  // namespace parikh

#endif  // PARIKH_GRAMMAR_HPP
