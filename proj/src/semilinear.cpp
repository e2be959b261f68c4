#include "parikh/semilinear.hpp"

#include "parikh/errors.hpp"
#include "parikh/linalg.hpp"

namespace parikh {

bool SimpleBundle::contains(const TermVector& v) const {
  LatticeSolver solver(periods);
  for (const auto& w : bases) {
    if (solver.solve(v - w)) return true;
  }
  return false;
}

bool SimpleBundle::bounded_by(std::int64_t base_bound, std::int64_t period_bound) const {
  for (const auto& w : bases) {
    if (w.norm_inf() > base_bound) return false;
  }
  for (const auto& p : periods) {
    if (p.norm_inf() > period_bound) return false;
  }
  return true;
}

void for_each_maximal_independent(std::span<const TermVector> vectors,
                                  const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> nonzero;
  std::vector<TermVector> nz_vectors;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (!vectors[i].is_zero()) {
      nonzero.push_back(i);
      nz_vectors.push_back(vectors[i]);
    }
  }
  const std::size_t r = rank(nz_vectors);
  std::vector<std::size_t> chosen;
  std::vector<TermVector> chosen_vectors;
  bool stop = false;
  // A subset is maximal independent exactly when it is independent and has
  // size equal to the rank of the whole family.
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (stop) return;
    if (chosen.size() == r) {
      if (!visit(chosen)) stop = true;
      return;
    }
    for (std::size_t k = from; k < nonzero.size() && !stop; ++k) {
      if (nonzero.size() - k < r - chosen.size()) break;
      chosen_vectors.push_back(nz_vectors[k]);
      if (is_linearly_independent(chosen_vectors)) {
        chosen.push_back(nonzero[k]);
        rec(k + 1);
        chosen.pop_back();
      }
      chosen_vectors.pop_back();
    }
  };
  rec(0);
}

bool linear_member(const LinearSet& set, const TermVector& v) {
  std::vector<TermVector> periods;
  std::int64_t entry_bound = 0;
  for (const auto& p : set.periods) {
    if (p.is_zero()) continue;
    periods.push_back(p);
    entry_bound = std::max(entry_bound, p.norm_inf());
  }
  const TermVector target = v - set.base;
  if (periods.empty()) return target.is_zero();

  const BigInt h = hadamard_bound(v.dim(), entry_bound);
  if (h > 1'000'000) throw CapExceeded("linear_member: coefficient bound too large to enumerate");
  const auto bound = static_cast<std::int64_t>(h);

  bool found = false;
  for_each_maximal_independent(periods, [&](const std::vector<std::size_t>& p0) {
    std::vector<TermVector> basis;
    std::vector<TermVector> rest;
    for (std::size_t i = 0, k = 0; i < periods.size(); ++i) {
      if (k < p0.size() && p0[k] == i) {
        basis.push_back(periods[i]);
        ++k;
      } else {
        rest.push_back(periods[i]);
      }
    }
    LatticeSolver solver(basis);
    std::function<bool(std::size_t, const TermVector&)> rec = [&](std::size_t i, const TermVector& left) {
      if (i == rest.size()) return solver.solve(left).has_value();
      TermVector cur = left;
      for (std::int64_t c = 0; c <= bound; ++c) {
        if (rec(i + 1, cur)) return true;
        cur -= rest[i];
      }
      return false;
    };
    found = rec(0, target);
    return !found;
  });
  return found;
}

bool semilinear_member(const SemilinearSet& set, const TermVector& v) {
  for (const auto& c : set.components) {
    if (linear_member(c, v)) return true;
  }
  return false;
}

bool bundles_member(std::span<const SimpleBundle> bundles, const TermVector& v) {
  for (const auto& b : bundles) {
    if (b.contains(v)) return true;
  }
  return false;
}

}  // namespace parikh
