#ifndef PARIKH_TESTS_SUPPORT_HPP
#define PARIKH_TESTS_SUPPORT_HPP

// Random generators and independent reference implementations shared by the
// unit tests and the acceptance runner. Nothing here calls into the library
// routines it is used to check.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "parikh/grammar.hpp"
#include "parikh/linalg.hpp"
#include "parikh/runs.hpp"

namespace testkit {

using parikh::Grammar;
using parikh::NTVector;
using parikh::TermVector;
using parikh::TransitionMultiset;
using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct GrammarShape {
  int nonterminals = 3;
  int letters = 2;
  bool regular = false;
  bool negative = false;  // allow outputs of -1
  int rules = 6;
};

// Random normal-form grammar with at least one final transition from every
// nonterminal that has rules. Names are Q0.. and a, b, c.
inline Grammar random_grammar(Rng& rng, const GrammarShape& shape) {
  Grammar g;
  static const char* letters[] = {"a", "b", "c", "d"};
  for (int i = 0; i < shape.letters; ++i) g.alphabet.push_back(letters[i]);
  for (int i = 0; i < shape.nonterminals; ++i) g.nonterminals.push_back("Q" + std::to_string(i));
  g.start = 0;
  const auto dim = static_cast<std::size_t>(shape.letters);
  auto output = [&] {
    TermVector out(dim);
    if (dim > 0 && coin(rng, 0.8)) {
      const auto i = static_cast<std::size_t>(uniform(rng, 0, shape.letters - 1));
      out[i] = shape.negative && coin(rng, 0.35) ? -1 : 1;
    }
    return out;
  };
  // A final rule on the start symbol keeps most languages non-empty.
  g.transitions.push_back({0, output(), {}});
  for (int r = 1; r < shape.rules; ++r) {
    parikh::Transition t;
    t.source = static_cast<int>(uniform(rng, 0, shape.nonterminals - 1));
    t.output = output();
    const int max_targets = shape.regular ? 1 : 2;
    const auto k = uniform(rng, 0, max_targets);
    for (std::int64_t j = 0; j < k; ++j) t.targets.push_back(static_cast<int>(uniform(rng, 0, shape.nonterminals - 1)));
    std::sort(t.targets.begin(), t.targets.end());
    g.transitions.push_back(std::move(t));
  }
  parikh::validate(g);
  return g;
}

struct Simulation {
  TransitionMultiset multiset;
  NTVector from;
  NTVector to;
  std::vector<std::size_t> firing;
};

// Fires random enabled transitions starting from `from`. Every prefix of a
// firing sequence is a subrun by construction.
inline Simulation simulate(const Grammar& g, Rng& rng, const NTVector& from, int steps, bool prefer_final = false) {
  Simulation s{TransitionMultiset(g.transitions.size()), from, from, {}};
  for (int step = 0; step < steps; ++step) {
    std::vector<std::size_t> enabled;
    std::vector<std::size_t> finals;
    for (std::size_t i = 0; i < g.transitions.size(); ++i) {
      const auto& t = g.transitions[i];
      if (s.to[static_cast<std::size_t>(t.source)] <= 0) continue;
      enabled.push_back(i);
      if (t.targets.empty()) finals.push_back(i);
    }
    if (enabled.empty()) break;
    const auto& pool = prefer_final && !finals.empty() && coin(rng, 0.6) ? finals : enabled;
    const auto id = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
    const auto& t = g.transitions[id];
    s.to[static_cast<std::size_t>(t.source)] -= 1;
    for (int q : t.targets) s.to[static_cast<std::size_t>(q)] += 1;
    s.multiset[id] += 1;
    s.firing.push_back(id);
  }
  return s;
}

inline bool all_zero(const NTVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

// A run from p: simulate, then drain pending nonterminals through final rules
// once the step budget is spent. Empty optional when draining gets stuck.
inline std::optional<Simulation> random_run(const Grammar& g, Rng& rng, int p, int steps) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto s = simulate(g, rng, parikh::nt_unit(g, p), steps);
    for (int guard = 0; guard < 200 && !all_zero(s.to); ++guard) {
      auto more = simulate(g, rng, s.to, 1, true);
      if (more.firing.empty()) break;
      s.multiset += more.multiset;
      s.to = more.to;
      s.firing.insert(s.firing.end(), more.firing.begin(), more.firing.end());
    }
    if (all_zero(s.to) && !s.multiset.empty()) return s;
  }
  return std::nullopt;
}

// Reference subrun predicate: Euler balance by direct summation, then
// connectivity as a fixpoint over the edges used by the multiset.
inline std::string reference_subrun_reason(const Grammar& g, const TransitionMultiset& r, const NTVector& from,
                                           const NTVector& to) {
  const auto n = g.num_nonterminals();
  for (auto c : r.counts())
    if (c < 0) return "negative-count";
  for (std::size_t q = 0; q < n; ++q)
    if (from[q] < 0 || to[q] < 0) return "negative-count";
  std::vector<std::int64_t> balance(n, 0);
  std::vector<bool> consumed(n, false);
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    const auto& t = g.transitions[i];
    balance[static_cast<std::size_t>(t.source)] += r[i];
    if (r[i] > 0) consumed[static_cast<std::size_t>(t.source)] = true;
    for (int q : t.targets) balance[static_cast<std::size_t>(q)] -= r[i];
  }
  for (std::size_t q = 0; q < n; ++q)
    if (balance[q] != from[q] - to[q]) return "euler-violation";
  std::vector<bool> reach(n, false);
  for (std::size_t q = 0; q < n; ++q) reach[q] = from[q] > 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < g.transitions.size(); ++i) {
      const auto& t = g.transitions[i];
      if (r[i] == 0 || !reach[static_cast<std::size_t>(t.source)]) continue;
      for (int q : t.targets) {
        if (!reach[static_cast<std::size_t>(q)]) {
          reach[static_cast<std::size_t>(q)] = true;
          changed = true;
        }
      }
    }
  }
  for (std::size_t q = 0; q < n; ++q)
    if (consumed[q] && !reach[q]) return "connectivity-violation";
  return "ok";
}

inline NTVector unit(const Grammar& g, int q) {
  NTVector v(g.num_nonterminals(), 0);
  v[static_cast<std::size_t>(q)] = 1;
  return v;
}

inline bool reference_cycle(const Grammar& g, const TransitionMultiset& r, int q) {
  return !r.empty() && reference_subrun_reason(g, r, unit(g, q), unit(g, q)) == "ok";
}

inline bool reference_run(const Grammar& g, const TransitionMultiset& r, int p) {
  return reference_subrun_reason(g, r, unit(g, p), NTVector(g.num_nonterminals(), 0)) == "ok";
}

// Calls visit for every 0 <= sub <= r (odometer order).
template <class Visit>
void each_submultiset(const TransitionMultiset& r, Visit&& visit) {
  TransitionMultiset sub(r.num_transitions());
  while (true) {
    visit(sub);
    std::size_t i = 0;
    while (i < r.num_transitions() && sub[i] == r[i]) sub[i++] = 0;
    if (i == r.num_transitions()) return;
    sub[i] += 1;
  }
}

// Simple at q: a cycle from q that is not C_a + C_o with C_a a non-empty
// cycle from q and C_o a non-empty cycle from some nonterminal.
inline bool reference_simple_cycle(const Grammar& g, const TransitionMultiset& c, int q) {
  if (!reference_cycle(g, c, q)) return false;
  bool splits = false;
  each_submultiset(c, [&](const TransitionMultiset& a) {
    if (splits || a.empty() || a == c || !reference_cycle(g, a, q)) return;
    const auto rest = c - a;
    for (int p = 0; p < static_cast<int>(g.num_nonterminals()); ++p) {
      if (reference_cycle(g, rest, p)) {
        splits = true;
        return;
      }
    }
  });
  return !splits;
}

// Every multiset over the grammar's transitions with size in [lo, hi].
template <class Visit>
void each_multiset_of_size(std::size_t num_transitions, int lo, int hi, Visit&& visit) {
  TransitionMultiset m(num_transitions);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == num_transitions) {
      for (int k = 0; k <= left; ++k) {
        m[i] = k;
        const auto size = m.size();
        if (size >= lo && size <= hi) visit(m);
      }
      m[i] = 0;
      return;
    }
    for (int k = 0; k <= left; ++k) {
      m[i] = k;
      self(self, i + 1, left - k);
    }
    m[i] = 0;
  };
  if (num_transitions > 0) rec(rec, 0, hi);
}

inline TermVector parikh_of(const Grammar& g, const TransitionMultiset& r) {
  TermVector v(g.num_terminals());
  for (std::size_t i = 0; i < g.transitions.size(); ++i) v += g.transitions[i].output * r[i];
  return v;
}

// Simulates a firing order; false if any count goes negative or a
// multiplicity is not matched exactly.
inline bool replay(const Grammar& g, const NTVector& from, const NTVector& to, const TransitionMultiset& r,
                   const std::vector<std::size_t>& order) {
  NTVector state = from;
  TransitionMultiset used(g.transitions.size());
  for (auto id : order) {
    if (id >= g.transitions.size()) return false;
    const auto& t = g.transitions[id];
    if (--state[static_cast<std::size_t>(t.source)] < 0) return false;
    for (int q : t.targets) state[static_cast<std::size_t>(q)] += 1;
    used[id] += 1;
  }
  return used == r && state == to;
}

inline parikh::BigInt cofactor_det(const std::vector<std::vector<long long>>& m) {
  const auto n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  parikh::BigInt det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    const auto term = m[0][c] * cofactor_det(minor);
    det += c % 2 == 0 ? term : parikh::BigInt(-term);
  }
  return det;
}

inline parikh::IntMatrix to_matrix(const std::vector<std::vector<long long>>& m) {
  parikh::IntMatrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c) out.at(r, c) = m[r][c];
  return out;
}

// base + sum c_i p_i == v for some c in [0..max_coeff]^|P|.
inline bool enumerate_linear(const TermVector& base, const std::vector<TermVector>& periods, int max_coeff,
                             const TermVector& v) {
  std::set<TermVector> frontier{base};
  for (const auto& p : periods) {
    std::set<TermVector> next;
    for (const auto& w : frontier) {
      TermVector x = w;
      for (int k = 0; k <= max_coeff; ++k) {
        next.insert(x);
        x += p;
      }
    }
    frontier = std::move(next);
  }
  return frontier.contains(v);
}

}  // namespace testkit

#endif  // PARIKH_TESTS_SUPPORT_HPP
