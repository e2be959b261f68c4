#ifndef PARIKH_SEMILINEAR_HPP
#define PARIKH_SEMILINEAR_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "parikh/term_vector.hpp"

namespace parikh {

// base + (N-combinations of periods). Periods may be dependent.
struct LinearSet {
  TermVector base;
  std::vector<TermVector> periods;
};

struct SemilinearSet {
  std::vector<LinearSet> components;
};

// W + (N-combinations of periods) with linearly independent periods.
struct SimpleBundle {
  std::vector<TermVector> bases;
  std::vector<TermVector> periods;

  bool contains(const TermVector& v) const;
  // Every base has infinity norm <= base_bound and every period <= period_bound.
  bool bounded_by(std::int64_t base_bound, std::int64_t period_bound) const;
};

bool linear_member(const LinearSet& set, const TermVector& v);
bool semilinear_member(const SemilinearSet& set, const TermVector& v);
bool bundles_member(std::span<const SimpleBundle> bundles, const TermVector& v);

// Calls visit(indices) for every maximal linearly independent subset of the
// nonzero vectors, indices ascending and subsets in lexicographic order.
// visit returns false to stop early.
void for_each_maximal_independent(std::span<const TermVector> vectors,
                                  const std::function<bool(const std::vector<std::size_t>&)>& visit);

}  // namespace parikh

#endif  // PARIKH_SEMILINEAR_HPP
