#ifndef PARIKH_MEMBERSHIP_HPP
#define PARIKH_MEMBERSHIP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parikh/grammar.hpp"
#include "parikh/runs.hpp"

namespace parikh {

enum class Answer {
  yes,
  no,
  bounded_no,  // no witness within a bound below the completeness threshold
  unknown,
};

std::string_view to_string(Answer a);

struct MembershipWitness {
  TermVector base;  // Parikh vector of base_run
  TransitionMultiset base_run;
  std::vector<TermVector> periods;
  std::vector<TransitionMultiset> cycles;  // one representative per period
  std::vector<std::int64_t> coefficients;

  // base_run plus coefficient copies of each cycle.
  TransitionMultiset expand() const;
};

struct MembershipResult {
  Answer answer = Answer::unknown;
  std::optional<MembershipWitness> witness;
};

// R_B(P, q) for every support set P with |P| <= k, keyed by bitmask.
class RunTable {
 public:
  RunTable(const Grammar& g, std::int64_t bound, std::size_t max_support);

  std::int64_t bound() const { return bound_; }
  std::vector<std::uint64_t> supports() const;
  // Sorted vectors of entry (P, q); empty when absent.
  std::vector<TermVector> entry(std::uint64_t support, int q) const;
  bool contains(std::uint64_t support, int q, const TermVector& v) const;
  TransitionMultiset representative(std::uint64_t support, int q, const TermVector& v) const;
  std::size_t largest_entry() const;

 private:
  struct Back {
    std::size_t transition;
  };
  using Entry = std::unordered_map<TermVector, Back, TermVectorHash>;
  const Entry* find(std::uint64_t support, int q) const;

  const Grammar* g_;
  std::int64_t bound_;
  std::size_t num_nt_;
  std::map<std::pair<std::uint64_t, int>, Entry> entries_;
};

// P_n(q1, q2): Parikh vectors of paths q1 -> q2 with at most n transitions.
class PathTable {
 public:
  PathTable(const Grammar& g, std::int64_t bound);

  std::vector<TermVector> entry(int q1, int q2) const;
  TransitionMultiset representative(int q1, int q2, const TermVector& v) const;

 private:
  struct Back {
    std::optional<std::size_t> transition;  // empty for the empty path
  };
  using Entry = std::unordered_map<TermVector, Back, TermVectorHash>;

  const Grammar* g_;
  std::size_t n_;
  std::vector<Entry> entries_;  // q1 * n + q2
};

RunTable build_run_table(const Grammar& g, std::int64_t bound, std::size_t max_support);
PathTable build_path_table(const Grammar& g, std::int64_t bound);

// Bases and cycles grouped into simple bundles with witnesses attached.
class BundleIndex {
 public:
  struct Base {
    TermVector vector;
    TransitionMultiset run;
  };
  struct Group {
    std::vector<TermVector> periods;
    std::vector<TransitionMultiset> cycles;
    std::vector<Base> bases;
  };

  void add(std::vector<TermVector> periods, std::vector<TransitionMultiset> cycles, const std::vector<Base>& bases);
  // Drops bases already covered by another base of the same group.
  void finish();
  // Tries groups with more periods first, then smaller bases.
  std::optional<MembershipWitness> find(const TermVector& v) const;
  const std::vector<Group>& groups() const { return groups_; }

 private:
  std::map<std::vector<TermVector>, std::size_t> index_;
  std::vector<Group> groups_;
  std::vector<std::set<TermVector>> seen_;
  std::vector<LatticeSolver> solvers_;
  std::vector<std::size_t> order_;  // groups with more periods first
};

// Membership for regular grammars via the run and path tables. The bound
// defaults to B_G; smaller bounds keep positive answers sound and report
// negatives as bounded_no.
class RegularMembership {
 public:
  explicit RegularMembership(const Grammar& g, std::optional<std::int64_t> bound = std::nullopt);

  MembershipResult query(const TermVector& v) const;
  std::int64_t bound() const { return bound_; }
  bool complete() const { return complete_; }
  const BundleIndex& index() const { return index_; }

 private:
  std::int64_t bound_ = 0;
  bool complete_ = false;
  BundleIndex index_;
};

MembershipResult member_regular(const Grammar& g, const TermVector& v,
                                std::optional<std::int64_t> bound = std::nullopt);

struct GeneralCaps {
  std::int64_t run_cap = 12;
  std::int64_t cycle_cap = 8;
};

// Guess-and-check membership for normal-form grammars: base runs up to
// run_cap, simple cycles up to cycle_cap anchored in the base's support.
class GeneralMembership {
 public:
  GeneralMembership(const Grammar& g, GeneralCaps caps, const SearchLimits& limits = {});

  MembershipResult query(const TermVector& v) const;
  bool complete() const { return complete_; }

 private:
  bool complete_ = false;
  BundleIndex index_;
};

MembershipResult member_general(const Grammar& g, const TermVector& v, GeneralCaps caps,
                                const SearchLimits& limits = {});

// Parikh vectors of complete derivations with at most `depth` steps and
// infinity norm <= window, by breadth-first expansion of sentential forms.
std::set<TermVector> oracle_language(const Grammar& g, std::int64_t depth, std::int64_t window);

struct WindowClosure {
  std::set<TermVector> vectors;
  // True when no derivation of an in-window vector needs an out-of-window
  // subderivation: no reachable transition has two summands (its output or a
  // target's subderivation) that can take opposite signs in one letter.
  bool exact = false;
};

// Least fixpoint of L(q) = union over transitions of output + sum of L(targets),
// every set clipped to the box [-window..window]^alphabet.
WindowClosure oracle_window_closure(const Grammar& g, std::int64_t window);

}  // namespace parikh

#endif  // PARIKH_MEMBERSHIP_HPP
