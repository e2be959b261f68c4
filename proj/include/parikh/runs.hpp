#ifndef PARIKH_RUNS_HPP
#define PARIKH_RUNS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parikh/grammar.hpp"
#include "parikh/linalg.hpp"

namespace parikh {

// Integer vector over nonterminal indices; multisets are the nonnegative case.
using NTVector = std::vector<std::int64_t>;

NTVector nt_unit(const Grammar& g, int q, std::int64_t k = 1);

// Multiplicity per transition id.
class TransitionMultiset {
 public:
  TransitionMultiset() = default;
  explicit TransitionMultiset(std::size_t num_transitions) : counts_(num_transitions, 0) {}
  explicit TransitionMultiset(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {}
  static TransitionMultiset of(const Grammar& g, std::initializer_list<std::pair<std::size_t, std::int64_t>> items);

  std::size_t num_transitions() const { return counts_.size(); }
  std::int64_t operator[](std::size_t id) const { return counts_[id]; }
  std::int64_t& operator[](std::size_t id) { return counts_[id]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t size() const;
  bool empty() const { return size() == 0; }
  // Componentwise <=.
  bool contained_in(const TransitionMultiset& other) const;

  TransitionMultiset& operator+=(const TransitionMultiset& o);
  TransitionMultiset& operator-=(const TransitionMultiset& o);
  friend TransitionMultiset operator+(TransitionMultiset a, const TransitionMultiset& b) { return a += b; }
  friend TransitionMultiset operator-(TransitionMultiset a, const TransitionMultiset& b) { return a -= b; }
  friend TransitionMultiset operator*(TransitionMultiset a, std::int64_t k) {
    for (auto& c : a.counts_) c *= k;
    return a;
  }
  friend bool operator==(const TransitionMultiset&, const TransitionMultiset&) = default;

 private:
  std::vector<std::int64_t> counts_;
};

// Size first, then the ascending id sequence lexicographically.
bool multiset_order(const TransitionMultiset& a, const TransitionMultiset& b);

// `t1*3 t2*1`; an empty multiset prints as `-`.
std::string format_multiset(const TransitionMultiset& r);
TransitionMultiset parse_multiset(std::string_view text, const Grammar& g);

struct RunStats {
  NTVector source;
  NTVector target;
  TermVector parikh;
  std::vector<int> support;  // nonterminals with source count > 0, ascending
  std::int64_t size = 0;
};

RunStats run_stats(const Grammar& g, const TransitionMultiset& r);
std::uint64_t support_mask(const Grammar& g, const TransitionMultiset& r);

enum class SubrunFailure { none, negative, euler, connectivity };

struct SubrunCheck {
  SubrunFailure reason = SubrunFailure::none;
  explicit operator bool() const { return reason == SubrunFailure::none; }
};

std::string_view to_string(SubrunFailure f);

SubrunCheck is_subrun(const Grammar& g, const TransitionMultiset& r, const NTVector& from, const NTVector& to);
bool is_run(const Grammar& g, const TransitionMultiset& r, int p);
bool is_path(const Grammar& g, const TransitionMultiset& r, int p1, int p2);
bool is_cycle(const Grammar& g, const TransitionMultiset& r, int p);
// First nonterminal q (index order) from which r is a non-empty cycle.
std::optional<int> cycle_anchor(const Grammar& g, const TransitionMultiset& r);

struct SubrunCert {
  TransitionMultiset multiset;
  NTVector from;
  NTVector to;
};

// Firing sequence of transition ids that never drives a count negative.
std::vector<std::size_t> order_subrun(const Grammar& g, const SubrunCert& cert);

class DerivationTree {
 public:
  struct Vertex {
    std::size_t transition;
    std::optional<std::size_t> parent;
  };

  DerivationTree() = default;
  explicit DerivationTree(std::size_t root_transition) { vertices_.push_back({root_transition, std::nullopt}); }

  std::size_t add_child(std::size_t parent, std::size_t transition);
  std::size_t size() const { return vertices_.size(); }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t depth(std::size_t v) const;
  std::size_t height() const;  // max depth

  // F(v) = target(v) - sum over children [source(child)].
  NTVector free_at(const Grammar& g, std::size_t v) const;
  NTVector free_total(const Grammar& g) const;
  // Root labeled from p and F(v) >= 0 everywhere.
  bool well_formed(const Grammar& g, int p) const;

 private:
  std::vector<Vertex> vertices_;
};

DerivationTree subrun_to_tree(const Grammar& g, const SubrunCert& cert);
TransitionMultiset tree_to_multiset(const Grammar& g, const DerivationTree& t);

// M + 1 for regular grammars, 2^(M+1) otherwise.
BigInt gamma_bound(std::uint64_t depth, bool regular);
// Saturating conversion used to size searches.
std::int64_t gamma_limit(std::uint64_t depth, bool regular, std::int64_t ceiling);

// Search budget for the exhaustive predicates below.
struct SearchLimits {
  std::uint64_t max_candidates = 2'000'000;
};

// Calls visit(sub) for every sub-multiset 0 <= sub <= r, ordered by size then
// id sequence; visit returns false to stop. Throws CapExceeded when the
// candidate count passes the limit.
void for_each_submultiset(const TransitionMultiset& r, std::int64_t max_size, const SearchLimits& limits,
                          const std::function<bool(const TransitionMultiset&)>& visit);

// Simple: C is a non-empty cycle from q and is not C_a + C_o with C_a a
// non-empty cycle from q and C_o a non-empty cycle from any nonterminal.
bool is_simple_cycle(const Grammar& g, const TransitionMultiset& c, int q, const SearchLimits& limits = {});
bool is_skeleton_run(const Grammar& g, const TransitionMultiset& r, int p, const SearchLimits& limits = {});

// Every multiset m over the allowed transitions with |m| <= max_size and
// target(m) - source(m) == balance, in size / id order. Used to enumerate
// cycles (balance 0) and runs from p (balance -[p]).
void for_each_balanced_multiset(const Grammar& g, const std::vector<bool>& allowed, std::int64_t max_size,
                                const NTVector& balance, const SearchLimits& limits,
                                const std::function<bool(const TransitionMultiset&)>& visit);

// Nonterminals reachable from q through transition targets (q included).
std::vector<bool> reachable_from(const Grammar& g, int q);

}  // namespace parikh

#endif  // PARIKH_RUNS_HPP
