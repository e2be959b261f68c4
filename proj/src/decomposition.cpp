#include "parikh/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <unordered_map>

#include "parikh/errors.hpp"

namespace parikh {

namespace {

void require_normal_form(const Grammar& g, const char* who) {
  if (!classify(g).normal_form) throw PreconditionError(std::string(who) + ": grammar is not in normal form");
}

std::int64_t cycle_size_limit(const Grammar& g) {
  return gamma_limit(g.num_nonterminals(), classify(g).regular, 1'000'000) - 1;
}

struct VectorKeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Distinct nonzero Parikh vectors of the simple cycles anchored in mask.
std::vector<TermVector> cycle_vectors(const Grammar& g, const std::vector<CycleEnumeration>& per_anchor,
                                      std::uint64_t mask) {
  std::set<TermVector> out;
  for (std::size_t q = 0; q < per_anchor.size(); ++q) {
    if (!(mask >> q & 1)) continue;
    for (const auto& c : per_anchor[q].cycles) {
      auto v = run_stats(g, c).parikh;
      if (!v.is_zero()) out.insert(v);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<CycleEnumeration> cycles_per_anchor(const Grammar& g, const SearchLimits& limits) {
  std::vector<CycleEnumeration> out;
  const auto cap = cycle_size_limit(g);
  for (std::size_t q = 0; q < g.num_nonterminals(); ++q) {
    out.push_back(enumerate_simple_cycles(g, static_cast<int>(q), cap, limits));
  }
  return out;
}

// Drops bases reachable from another base by the periods.
std::vector<TermVector> minimize_bases(const std::set<TermVector>& bases, const std::vector<TermVector>& periods) {
  LatticeSolver solver(periods);
  std::vector<TermVector> kept(bases.begin(), bases.end());
  for (std::size_t i = 0; i < kept.size();) {
    bool redundant = false;
    for (std::size_t j = 0; j < kept.size() && !redundant; ++j) {
      if (j != i && solver.solve(kept[i] - kept[j])) redundant = true;
    }
    if (redundant) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return kept;
}

std::vector<SimpleBundle> prune_bundles(std::map<std::vector<TermVector>, std::set<TermVector>> grouped) {
  std::vector<std::pair<std::vector<TermVector>, std::set<TermVector>>> items(grouped.begin(), grouped.end());
  auto subsumes = [](const auto& big, const auto& small) {
    const auto& [zb, wb] = big;
    const auto& [zs, ws] = small;
    return std::includes(zb.begin(), zb.end(), zs.begin(), zs.end()) &&
           std::includes(wb.begin(), wb.end(), ws.begin(), ws.end());
  };
  std::vector<SimpleBundle> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool dropped = false;
    for (std::size_t j = 0; j < items.size() && !dropped; ++j) {
      if (i != j && subsumes(items[j], items[i])) dropped = true;
    }
    if (dropped) continue;
    out.push_back({minimize_bases(items[i].second, items[i].first), items[i].first});
  }
  return out;
}

std::set<TermVector> sumset(const std::set<TermVector>& a, const std::set<TermVector>& b, std::size_t cap) {
  std::set<TermVector> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.insert(x + y);
      if (out.size() > cap) throw CapExceeded("bundle base set exceeds " + std::to_string(cap) + " vectors");
    }
  }
  return out;
}

// {0, c, 2c, ..., (count - 1) c}
std::set<TermVector> multiples(const TermVector& c, std::int64_t count) {
  std::set<TermVector> out;
  TermVector cur(c.dim());
  for (std::int64_t k = 0; k < count; ++k) {
    out.insert(cur);
    cur += c;
  }
  return out;
}

bool is_truncated(const Grammar& g, std::int64_t run_cap) { return BigInt(run_cap) < compute_bg(g).value; }

}  // namespace

BGBound compute_bg(const Grammar& g) {
  require_normal_form(g, "compute_bg");
  BGBound b;
  b.N = g.num_nonterminals();
  b.A = g.num_terminals();
  b.regular = classify(g).regular;
  b.gamma_cycle = gamma_bound(b.N, b.regular);
  b.gamma_skeleton = gamma_bound(b.N * b.N, b.regular);
  b.hadamard = hadamard_bound(b.A, b.gamma_cycle);
  b.value = b.gamma_skeleton + pow(BigInt(2) * b.gamma_cycle, static_cast<unsigned>(1 + b.A)) * b.hadamard;
  return b;
}

CycleEnumeration enumerate_simple_cycles(const Grammar& g, int q, std::int64_t cap, const SearchLimits& limits) {
  require_normal_form(g, "enumerate_simple_cycles");
  const auto full = cycle_size_limit(g);
  CycleEnumeration out;
  out.truncated = cap < full;
  const auto max_size = std::min(full, cap);
  const auto reach = reachable_from(g, q);
  std::vector<bool> allowed(g.transitions.size());
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    allowed[i] = reach[static_cast<std::size_t>(g.transitions[i].source)];
  }
  const NTVector zero(g.num_nonterminals(), 0);
  for_each_balanced_multiset(g, allowed, max_size, zero, limits, [&](const TransitionMultiset& c) {
    if (!c.empty() && is_cycle(g, c, q) && is_simple_cycle(g, c, q, limits)) out.cycles.push_back(c);
    return true;
  });
  return out;
}

Decomposition decompose_run(const Grammar& g, const TransitionMultiset& r, int p, const SearchLimits& limits) {
  require_normal_form(g, "decompose_run");
  if (!is_run(g, r, p)) throw PreconditionError("decompose_run: multiset is not a run from " + g.nonterminals[p]);

  const auto max_cycle = cycle_size_limit(g);
  TransitionMultiset rest = r;
  std::vector<std::pair<TransitionMultiset, int>> stripped;
  std::uint64_t anchors = 0;

  for (;;) {
    std::optional<std::pair<TransitionMultiset, int>> found;
    for_each_submultiset(rest, std::min(max_cycle, rest.size() - 1), limits, [&](const TransitionMultiset& c) {
      if (c.empty()) return true;
      const auto remainder = rest - c;
      const auto mask = support_mask(g, remainder);
      if ((anchors & ~mask) != 0 || !is_run(g, remainder, p)) return true;
      for (std::size_t q = 0; q < g.num_nonterminals(); ++q) {
        if (!(mask >> q & 1)) continue;
        if (is_cycle(g, c, static_cast<int>(q)) && is_simple_cycle(g, c, static_cast<int>(q), limits)) {
          found.emplace(c, static_cast<int>(q));
          return false;
        }
      }
      return true;
    });
    if (!found) break;
    rest -= found->first;
    anchors |= std::uint64_t{1} << found->second;
    stripped.push_back(std::move(*found));
  }

  // Merge cycles with equal Parikh vectors, keeping the first representative.
  std::vector<TermVector> vectors;
  std::vector<BigInt> counts;
  std::vector<std::pair<TransitionMultiset, int>> reps;
  for (auto& [c, q] : stripped) {
    auto v = run_stats(g, c).parikh;
    auto it = std::find(vectors.begin(), vectors.end(), v);
    if (it == vectors.end()) {
      vectors.push_back(v);
      counts.push_back(1);
      reps.emplace_back(c, q);
    } else {
      counts[static_cast<std::size_t>(it - vectors.begin())] += 1;
    }
  }

  Decomposition out;
  out.base_run = rest;
  if (vectors.empty()) return out;

  std::int64_t entry_bound = 0;
  for (const auto& v : vectors) entry_bound = std::max(entry_bound, v.norm_inf());
  const auto reduced = reduce_multiplicities(vectors, counts, entry_bound);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const BigInt& n = reduced.coefficients[i];
    const bool keep = std::binary_search(reduced.independent.begin(), reduced.independent.end(), i);
    if (keep) {
      out.cycles.push_back({reps[i].first, reps[i].second, n});
    } else if (n > 0) {
      out.base_run += reps[i].first * static_cast<std::int64_t>(n);
    }
  }
  return out;
}

BaseRuns enumerate_base_runs(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits) {
  const std::size_t n = g.num_nonterminals();
  const std::size_t a = g.num_terminals();
  if (n > 64) throw PreconditionError("enumerate_base_runs: more than 64 nonterminals");

  struct Node {
    std::vector<std::int64_t> key;  // pending counts, mask, parikh
    std::int64_t steps;
    std::size_t parent;
    std::size_t transition;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<std::int64_t>, std::size_t, VectorKeyHash> seen;
  std::deque<std::size_t> queue;
  BaseRuns out;

  std::vector<std::int64_t> root(n + 1 + a, 0);
  root[static_cast<std::size_t>(g.start)] = 1;
  nodes.push_back({root, 0, 0, 0});
  seen.emplace(root, 0);
  queue.push_back(0);

  auto rebuild = [&](std::size_t idx) {
    TransitionMultiset m(g.transitions.size());
    while (idx != 0) {
      m[nodes[idx].transition] += 1;
      idx = nodes[idx].parent;
    }
    return m;
  };

  std::uint64_t work = 0;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const auto key = nodes[cur].key;
    const auto steps = nodes[cur].steps;
    std::size_t q = 0;
    while (q < n && key[q] == 0) ++q;
    if (q == n) continue;
    std::int64_t pending = 0;
    for (std::size_t i = 0; i < n; ++i) pending += key[i];
    for (std::size_t t = 0; t < g.transitions.size(); ++t) {
      const auto& tr = g.transitions[t];
      if (static_cast<std::size_t>(tr.source) != q) continue;
      if (++work > limits.max_candidates) throw CapExceeded("base run enumeration exceeded its budget");
      const std::int64_t next_pending = pending - 1 + static_cast<std::int64_t>(tr.targets.size());
      if (next_pending > run_cap - steps - 1) continue;
      auto next = key;
      next[q] -= 1;
      for (int r : tr.targets) next[static_cast<std::size_t>(r)] += 1;
      next[n] |= std::int64_t{1} << q;
      for (std::size_t i = 0; i < a; ++i) next[n + 1 + i] += tr.output[i];
      if (seen.contains(next)) continue;
      const std::size_t idx = nodes.size();
      seen.emplace(next, idx);
      nodes.push_back({next, steps + 1, cur, t});
      if (next_pending == 0) {
        TermVector v(std::vector<std::int64_t>(next.begin() + static_cast<std::ptrdiff_t>(n + 1), next.end()));
        auto& slot = out.by_support[static_cast<std::uint64_t>(next[n])];
        if (!slot.contains(v)) slot.emplace(std::move(v), rebuild(idx));
      } else {
        queue.push_back(idx);
      }
    }
  }
  return out;
}

BundleSet regular_bundles(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits) {
  if (!classify(g).regular) throw PreconditionError("regular_bundles: grammar is not regular");
  BundleSet out;
  out.truncated = is_truncated(g, run_cap);
  const auto base = enumerate_base_runs(g, run_cap, limits);
  const auto per_anchor = cycles_per_anchor(g, limits);

  std::map<std::vector<TermVector>, std::set<TermVector>> grouped;
  for (const auto& [mask, runs] : base.by_support) {
    const auto cycles = cycle_vectors(g, per_anchor, mask);
    for_each_maximal_independent(cycles, [&](const std::vector<std::size_t>& idx) {
      std::vector<TermVector> z;
      for (auto i : idx) z.push_back(cycles[i]);
      auto& w = grouped[z];
      for (const auto& [v, rep] : runs) w.insert(v);
      return true;
    });
  }
  out.bundles = prune_bundles(std::move(grouped));
  return out;
}

std::optional<std::vector<TermVector>> extreme_rays_2d(std::span<const TermVector> vectors) {
  std::vector<TermVector> vs;
  for (const auto& v : vectors) {
    if (v.dim() != 2) throw PreconditionError("extreme_rays_2d: vectors must be two-dimensional");
    if (!v.is_zero()) vs.push_back(v);
  }
  if (vs.empty()) return std::vector<TermVector>{};
  auto half = [](const TermVector& v) { return v[1] < 0 || (v[1] == 0 && v[0] < 0) ? 1 : 0; };
  auto cross = [](const TermVector& u, const TermVector& v) { return u[0] * v[1] - u[1] * v[0]; };
  auto dot = [](const TermVector& u, const TermVector& v) { return u[0] * v[0] + u[1] * v[1]; };
  // Angular order; within one direction the shorter vector first.
  std::sort(vs.begin(), vs.end(), [&](const TermVector& u, const TermVector& v) {
    if (half(u) != half(v)) return half(u) < half(v);
    const auto c = cross(u, v);
    if (c != 0) return c > 0;
    return u.norm_inf() < v.norm_inf();
  });
  // Collapse each direction to its shortest vector.
  std::vector<TermVector> dirs;
  for (const auto& v : vs) {
    if (!dirs.empty() && cross(dirs.back(), v) == 0 && dot(dirs.back(), v) > 0) continue;
    dirs.push_back(v);
  }
  if (dirs.size() == 1) return dirs;
  // The cone is pointed iff some ccw gap between consecutive directions
  // exceeds a half turn.
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& a = dirs[i];
    const auto& b = dirs[(i + 1) % dirs.size()];
    if (cross(a, b) < 0) return std::vector<TermVector>{b, a};
  }
  return std::nullopt;
}

BundleSet dim2_bundles(const Grammar& g, std::int64_t run_cap, const SearchLimits& limits) {
  if (g.num_terminals() != 2) throw PreconditionError("dim2_bundles: alphabet must have exactly two letters");
  require_normal_form(g, "dim2_bundles");
  constexpr std::size_t kBaseCap = 200'000;
  BundleSet out;
  out.truncated = is_truncated(g, run_cap);
  const auto base = enumerate_base_runs(g, run_cap, limits);
  const auto per_anchor = cycles_per_anchor(g, limits);

  std::map<std::vector<TermVector>, std::set<TermVector>> grouped;
  for (const auto& [mask, runs] : base.by_support) {
    std::set<TermVector> w;
    for (const auto& [v, rep] : runs) w.insert(v);
    const auto cycles = cycle_vectors(g, per_anchor, mask);
    const auto rays = extreme_rays_2d(cycles);
    if (rays) {
      // Every cycle c lies in the cone of the rays, so d * c is an
      // N-combination of them for d = |det| (or the ray ratio); the remainders
      // below d are folded into the bases.
      std::vector<TermVector> z = *rays;
      std::sort(z.begin(), z.end());
      LatticeSolver solver(z);
      std::set<TermVector> extra{TermVector(2)};
      for (const auto& c : cycles) {
        if (std::find(z.begin(), z.end(), c) != z.end()) continue;
        std::int64_t d = 1;
        while (!solver.solve(c * d)) {
          if (++d > 1'000'000) throw Error("dim2_bundles: cycle outside the cone of its extreme rays");
        }
        extra = sumset(extra, multiples(c, d), kBaseCap);
      }
      auto& slot = grouped[z];
      for (const auto& v : sumset(w, extra, kBaseCap)) slot.insert(v);
      continue;
    }
    std::int64_t entry_bound = 0;
    for (const auto& c : cycles) entry_bound = std::max(entry_bound, c.norm_inf());
    const auto h = static_cast<std::int64_t>(hadamard_bound(2, entry_bound));
    for_each_maximal_independent(cycles, [&](const std::vector<std::size_t>& idx) {
      std::vector<TermVector> z;
      std::set<TermVector> extra{TermVector(2)};
      for (std::size_t i = 0, k = 0; i < cycles.size(); ++i) {
        if (k < idx.size() && idx[k] == i) {
          z.push_back(cycles[i]);
          ++k;
        } else {
          extra = sumset(extra, multiples(cycles[i], h + 1), kBaseCap);
        }
      }
      auto& slot = grouped[z];
      for (const auto& v : sumset(w, extra, kBaseCap)) slot.insert(v);
      return true;
    });
  }
  out.bundles = prune_bundles(std::move(grouped));
  return out;
}

}  // namespace parikh
