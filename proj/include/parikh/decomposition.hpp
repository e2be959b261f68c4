#ifndef PARIKH_DECOMPOSITION_HPP
#define PARIKH_DECOMPOSITION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "parikh/grammar.hpp"
#include "parikh/linalg.hpp"
#include "parikh/runs.hpp"
#include "parikh/semilinear.hpp"

namespace parikh {

struct BGBound {
  std::size_t N = 0;
  std::size_t A = 0;
  bool regular = false;
  BigInt gamma_cycle;     // gamma(N)
  BigInt gamma_skeleton;  // gamma(N^2)
  BigInt hadamard;        // h(A, gamma(N))
  BigInt value;
};

// B_G = gamma(N^2) + (2 gamma(N))^(1+A) * h(A, gamma(N)). Requires normal form.
BGBound compute_bg(const Grammar& g);

struct CycleEnumeration {
  std::vector<TransitionMultiset> cycles;  // sorted by multiset_order
  bool truncated = false;                  // cap below gamma(N) - 1
};

// All simple cycles from q with size < min(gamma(N), cap + 1).
CycleEnumeration enumerate_simple_cycles(const Grammar& g, int q, std::int64_t cap, const SearchLimits& limits = {});

struct DecomposedCycle {
  TransitionMultiset cycle;
  int anchor = 0;
  BigInt multiplicity;
};

struct Decomposition {
  TransitionMultiset base_run;
  std::vector<DecomposedCycle> cycles;
};

Decomposition decompose_run(const Grammar& g, const TransitionMultiset& r, int p, const SearchLimits& limits = {});

// Runs from the start symbol with at most run_cap transitions, grouped by
// support mask; one smallest representative run per Parikh vector.
struct BaseRuns {
  std::map<std::uint64_t, std::map<TermVector, TransitionMultiset>> by_support;
};

BaseRuns enumerate_base_runs(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits = {});

struct BundleSet {
  std::vector<SimpleBundle> bundles;
  bool truncated = false;  // run_cap below B_G
};

BundleSet regular_bundles(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits = {});

/**
 * Bundles for two-letter grammars built from the extreme simple cycles of each
 * support. When the cycles of a support span a pointed cone the periods are its
 * (at most two) extreme rays; otherwise every independent pair of cycle
 * vectors is used with bounded multiples of the remaining cycles folded into
 * the bases.
 */
BundleSet dim2_bundles(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits = {});

// Extreme rays of the cone spanned by nonzero 2D vectors, or nullopt when the
// cone is not pointed. One ray when all vectors share a direction.
std::optional<std::vector<TermVector>> extreme_rays_2d(std::span<const TermVector> vectors);

}  // namespace parikh

#endif  // PARIKH_DECOMPOSITION_HPP
