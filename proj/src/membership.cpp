#include "parikh/membership.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "parikh/decomposition.hpp"
#include "parikh/errors.hpp"
#include "parikh/semilinear.hpp"

namespace parikh {

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "true";
    case Answer::no: return "false";
    case Answer::bounded_no: return "false-within-bound";
    case Answer::unknown: return "unknown";
  }
  return "?";
}

TransitionMultiset MembershipWitness::expand() const {
  TransitionMultiset out = base_run;
  for (std::size_t i = 0; i < cycles.size(); ++i) out += cycles[i] * coefficients[i];
  return out;
}

namespace {

void require_regular(const Grammar& g, const char* who) {
  if (!classify(g).regular) throw PreconditionError(std::string(who) + ": grammar is not regular");
}

}  // namespace

RunTable::RunTable(const Grammar& g, std::int64_t bound, std::size_t max_support)
    : g_(&g), bound_(bound), num_nt_(g.num_nonterminals()) {
  require_regular(g, "build_run_table");
  if (num_nt_ > 64) throw PreconditionError("build_run_table: more than 64 nonterminals");
  std::vector<std::uint64_t> masks;
  // Enumerate subsets with at most max_support elements in increasing size.
  for (std::size_t size = 0; size <= std::min(max_support, num_nt_); ++size) {
    std::function<void(std::size_t, std::uint64_t, std::size_t)> rec = [&](std::size_t from, std::uint64_t m,
                                                                          std::size_t left) {
      if (left == 0) {
        masks.push_back(m);
        return;
      }
      for (std::size_t q = from; q < num_nt_; ++q) rec(q + 1, m | (std::uint64_t{1} << q), left - 1);
    };
    rec(0, 0, size);
  }

  using Delta = std::map<std::pair<std::uint64_t, int>, std::vector<TermVector>>;
  Delta delta;
  for (auto m : masks) {
    for (std::size_t q = 0; q < num_nt_; ++q) entries_[{m, static_cast<int>(q)}];
  }
  if (bound < 1) return;
  // Base case: single final transitions.
  for (std::size_t t = 0; t < g.transitions.size(); ++t) {
    const auto& tr = g.transitions[t];
    if (!tr.targets.empty()) continue;
    const std::uint64_t own = std::uint64_t{1} << tr.source;
    for (auto m : masks) {
      if ((m & ~own) != 0) continue;
      auto& e = entries_[{m, tr.source}];
      if (e.emplace(tr.output, Back{t}).second) delta[{m, tr.source}].push_back(tr.output);
    }
  }
  for (std::int64_t n = 2; n <= bound && !delta.empty(); ++n) {
    Delta next;
    for (auto m : masks) {
      for (std::size_t t = 0; t < g.transitions.size(); ++t) {
        const auto& tr = g.transitions[t];
        if (tr.targets.empty()) continue;
        const std::uint64_t rest = m & ~(std::uint64_t{1} << tr.source);
        auto it = delta.find({rest, tr.targets[0]});
        if (it == delta.end()) continue;
        auto& e = entries_[{m, tr.source}];
        for (const auto& v : it->second) {
          auto w = v + tr.output;
          if (!e.contains(w)) {
            e.emplace(w, Back{t});
            next[{m, tr.source}].push_back(std::move(w));
          }
        }
      }
    }
    delta = std::move(next);
  }
}

const RunTable::Entry* RunTable::find(std::uint64_t support, int q) const {
  auto it = entries_.find({support, q});
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> RunTable::supports() const {
  std::vector<std::uint64_t> out;
  for (const auto& [key, e] : entries_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::vector<TermVector> RunTable::entry(std::uint64_t support, int q) const {
  std::vector<TermVector> out;
  if (const auto* e = find(support, q)) {
    for (const auto& [v, b] : *e) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool RunTable::contains(std::uint64_t support, int q, const TermVector& v) const {
  const auto* e = find(support, q);
  return e != nullptr && e->contains(v);
}

TransitionMultiset RunTable::representative(std::uint64_t support, int q, const TermVector& v) const {
  TransitionMultiset out(g_->transitions.size());
  TermVector cur = v;
  for (;;) {
    const auto* e = find(support, q);
    if (e == nullptr || !e->contains(cur)) throw PreconditionError("RunTable: vector not in entry");
    const auto t = e->at(cur).transition;
    const auto& tr = g_->transitions[t];
    out[t] += 1;
    if (tr.targets.empty()) return out;
    support &= ~(std::uint64_t{1} << q);
    q = tr.targets[0];
    cur -= tr.output;
  }
}

std::size_t RunTable::largest_entry() const {
  std::size_t m = 0;
  for (const auto& [k, e] : entries_) m = std::max(m, e.size());
  return m;
}

PathTable::PathTable(const Grammar& g, std::int64_t bound) : g_(&g), n_(g.num_nonterminals()) {
  require_regular(g, "build_path_table");
  entries_.resize(n_ * n_);
  // delta[q1 * n + q2] holds vectors first reached in the previous round.
  std::vector<std::vector<TermVector>> delta(n_ * n_);
  for (std::size_t q = 0; q < n_; ++q) {
    entries_[q * n_ + q].emplace(TermVector(g.num_terminals()), Back{std::nullopt});
    delta[q * n_ + q].push_back(TermVector(g.num_terminals()));
  }
  for (std::int64_t round = 1; round <= bound; ++round) {
    std::vector<std::vector<TermVector>> next(n_ * n_);
    for (std::size_t t = 0; t < g.transitions.size(); ++t) {
      const auto& tr = g.transitions[t];
      if (tr.targets.empty()) continue;
      const auto q1 = static_cast<std::size_t>(tr.source);
      const auto r = static_cast<std::size_t>(tr.targets[0]);
      for (std::size_t q2 = 0; q2 < n_; ++q2) {
        auto& e = entries_[q1 * n_ + q2];
        for (const auto& v : delta[r * n_ + q2]) {
          auto w = v + tr.output;
          if (!e.contains(w)) {
            e.emplace(w, Back{t});
            next[q1 * n_ + q2].push_back(std::move(w));
          }
        }
      }
    }
    delta = std::move(next);
  }
}

std::vector<TermVector> PathTable::entry(int q1, int q2) const {
  std::vector<TermVector> out;
  for (const auto& [v, b] : entries_[static_cast<std::size_t>(q1) * n_ + static_cast<std::size_t>(q2)]) {
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TransitionMultiset PathTable::representative(int q1, int q2, const TermVector& v) const {
  TransitionMultiset out(g_->transitions.size());
  TermVector cur = v;
  for (;;) {
    const auto& e = entries_[static_cast<std::size_t>(q1) * n_ + static_cast<std::size_t>(q2)];
    auto it = e.find(cur);
    if (it == e.end()) throw PreconditionError("PathTable: vector not in entry");
    if (!it->second.transition) return out;
    const auto t = *it->second.transition;
    out[t] += 1;
    q1 = g_->transitions[t].targets[0];
    cur -= g_->transitions[t].output;
  }
}

RunTable build_run_table(const Grammar& g, std::int64_t bound, std::size_t max_support) {
  return RunTable(g, bound, max_support);
}

PathTable build_path_table(const Grammar& g, std::int64_t bound) { return PathTable(g, bound); }

void BundleIndex::add(std::vector<TermVector> periods, std::vector<TransitionMultiset> cycles,
                      const std::vector<Base>& bases) {
  auto [it, fresh] = index_.emplace(periods, groups_.size());
  if (fresh) {
    groups_.push_back({std::move(periods), std::move(cycles), {}});
    seen_.emplace_back();
  }
  auto& group = groups_[it->second];
  auto& seen = seen_[it->second];
  for (const auto& b : bases) {
    if (seen.insert(b.vector).second) group.bases.push_back(b);
  }
}

void BundleIndex::finish() {
  solvers_.clear();
  for (auto& group : groups_) {
    LatticeSolver solver(group.periods);
    std::stable_sort(group.bases.begin(), group.bases.end(), [](const Base& a, const Base& b) {
      const auto na = a.vector.norm1();
      const auto nb = b.vector.norm1();
      return na != nb ? na < nb : a.vector < b.vector;
    });
    std::vector<Base> kept;
    for (auto& b : group.bases) {
      bool covered = false;
      for (const auto& k : kept) {
        if (solver.solve(b.vector - k.vector)) {
          covered = true;
          break;
        }
      }
      if (!covered) kept.push_back(std::move(b));
    }
    group.bases = std::move(kept);
    solvers_.push_back(std::move(solver));
  }
  seen_.clear();
  order_.resize(groups_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return groups_[a].periods.size() > groups_[b].periods.size();
  });
}

std::optional<MembershipWitness> BundleIndex::find(const TermVector& v) const {
  for (auto i : order_) {
    const auto& group = groups_[i];
    for (const auto& b : group.bases) {
      if (auto c = solvers_[i].solve(v - b.vector)) {
        return MembershipWitness{b.vector, b.run, group.periods, group.cycles, std::move(*c)};
      }
    }
  }
  return std::nullopt;
}

namespace {

// Adds one group per maximal independent subset of the cycle vectors.
void add_groups(BundleIndex& index, const std::map<TermVector, TransitionMultiset>& cycles,
                const std::vector<BundleIndex::Base>& bases) {
  if (bases.empty()) return;
  std::vector<TermVector> vectors;
  std::vector<TransitionMultiset> reps;
  for (const auto& [v, c] : cycles) {
    if (v.is_zero()) continue;
    vectors.push_back(v);
    reps.push_back(c);
  }
  for_each_maximal_independent(vectors, [&](const std::vector<std::size_t>& idx) {
    std::vector<TermVector> z;
    std::vector<TransitionMultiset> zc;
    for (auto i : idx) {
      z.push_back(vectors[i]);
      zc.push_back(reps[i]);
    }
    index.add(std::move(z), std::move(zc), bases);
    return true;
  });
}

}  // namespace

RegularMembership::RegularMembership(const Grammar& g, std::optional<std::int64_t> bound) {
  require_regular(g, "member_regular");
  const BigInt bg = compute_bg(g).value;
  if (bound) {
    bound_ = *bound;
  } else {
    if (bg > 1'000'000) throw CapExceeded("member_regular: B_G = " + bg.str() + " is too large; pass a bound");
    bound_ = static_cast<std::int64_t>(bg);
  }
  complete_ = BigInt(bound_) >= bg;

  const std::size_t k = std::min(g.num_terminals(), g.num_nonterminals());
  const RunTable runs(g, bound_, k);
  const PathTable paths(g, static_cast<std::int64_t>(g.num_nonterminals()));
  for (auto support : runs.supports()) {
    std::vector<BundleIndex::Base> bases;
    for (const auto& w : runs.entry(support, g.start)) {
      bases.push_back({w, runs.representative(support, g.start, w)});
    }
    std::map<TermVector, TransitionMultiset> cycles;
    for (std::size_t q = 0; q < g.num_nonterminals(); ++q) {
      if (!(support >> q & 1)) continue;
      const int qi = static_cast<int>(q);
      for (const auto& v : paths.entry(qi, qi)) {
        if (!cycles.contains(v)) cycles.emplace(v, paths.representative(qi, qi, v));
      }
    }
    add_groups(index_, cycles, bases);
  }
  index_.finish();
}

MembershipResult RegularMembership::query(const TermVector& v) const {
  if (auto w = index_.find(v)) return {Answer::yes, std::move(w)};
  return {complete_ ? Answer::no : Answer::bounded_no, std::nullopt};
}

MembershipResult member_regular(const Grammar& g, const TermVector& v, std::optional<std::int64_t> bound) {
  return RegularMembership(g, bound).query(v);
}

GeneralMembership::GeneralMembership(const Grammar& g, GeneralCaps caps, const SearchLimits& limits) {
  if (!classify(g).normal_form) throw PreconditionError("member_general: grammar is not in normal form");
  const auto bg = compute_bg(g);
  const auto base = enumerate_base_runs(g, caps.run_cap, limits);
  std::vector<CycleEnumeration> per_anchor;
  bool cycles_truncated = false;
  for (std::size_t q = 0; q < g.num_nonterminals(); ++q) {
    per_anchor.push_back(enumerate_simple_cycles(g, static_cast<int>(q), caps.cycle_cap, limits));
    cycles_truncated = cycles_truncated || per_anchor.back().truncated;
  }
  complete_ = !cycles_truncated && BigInt(caps.run_cap) >= bg.value;

  for (const auto& [mask, runs] : base.by_support) {
    std::vector<BundleIndex::Base> bases;
    for (const auto& [v, r] : runs) bases.push_back({v, r});
    std::map<TermVector, TransitionMultiset> cycles;
    for (std::size_t q = 0; q < per_anchor.size(); ++q) {
      if (!(mask >> q & 1)) continue;
      for (const auto& c : per_anchor[q].cycles) {
        auto v = run_stats(g, c).parikh;
        if (!cycles.contains(v)) cycles.emplace(std::move(v), c);
      }
    }
    add_groups(index_, cycles, bases);
  }
  index_.finish();
}

MembershipResult GeneralMembership::query(const TermVector& v) const {
  if (auto w = index_.find(v)) return {Answer::yes, std::move(w)};
  return {complete_ ? Answer::no : Answer::unknown, std::nullopt};
}

MembershipResult member_general(const Grammar& g, const TermVector& v, GeneralCaps caps,
                                const SearchLimits& limits) {
  return GeneralMembership(g, caps, limits).query(v);
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

bool in_box(const TermVector& v, std::int64_t window) { return v.norm_inf() <= window; }

}  // namespace

std::set<TermVector> oracle_language(const Grammar& g, std::int64_t depth, std::int64_t window) {
  const std::size_t n = g.num_nonterminals();
  const std::size_t a = g.num_terminals();
  std::set<TermVector> out;
  std::vector<std::int64_t> start(n + a, 0);
  start[static_cast<std::size_t>(g.start)] = 1;
  std::unordered_set<std::vector<std::int64_t>, KeyHash> seen{start};
  std::vector<std::vector<std::int64_t>> level{start};
  for (std::int64_t step = 0; step < depth && !level.empty(); ++step) {
    std::vector<std::vector<std::int64_t>> next;
    const std::int64_t remaining = depth - step - 1;
    for (const auto& form : level) {
      std::int64_t pending = 0;
      for (std::size_t q = 0; q < n; ++q) pending += form[q];
      for (const auto& tr : g.transitions) {
        const auto src = static_cast<std::size_t>(tr.source);
        if (form[src] == 0) continue;
        const std::int64_t after = pending - 1 + static_cast<std::int64_t>(tr.targets.size());
        if (after > remaining) continue;
        auto succ = form;
        succ[src] -= 1;
        for (int r : tr.targets) succ[static_cast<std::size_t>(r)] += 1;
        for (std::size_t i = 0; i < a; ++i) succ[n + i] += tr.output[i];
        if (!seen.insert(succ).second) continue;
        if (after == 0) {
          TermVector v(std::vector<std::int64_t>(succ.begin() + static_cast<std::ptrdiff_t>(n), succ.end()));
          if (in_box(v, window)) out.insert(std::move(v));
        } else {
          next.push_back(std::move(succ));
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

WindowClosure oracle_window_closure(const Grammar& g, std::int64_t window) {
  const std::size_t n = g.num_nonterminals();
  const std::size_t a = g.num_terminals();
  WindowClosure out;

  // Sign profile of every nonterminal: which signs its subderivations can emit per letter.
  std::vector<std::vector<bool>> pos(n, std::vector<bool>(a, false));
  std::vector<std::vector<bool>> neg(n, std::vector<bool>(a, false));
  for (std::size_t q = 0; q < n; ++q) {
    const auto reach = reachable_from(g, static_cast<int>(q));
    for (const auto& tr : g.transitions) {
      if (!reach[static_cast<std::size_t>(tr.source)]) continue;
      for (std::size_t i = 0; i < a; ++i) {
        if (tr.output[i] > 0) pos[q][i] = true;
        if (tr.output[i] < 0) neg[q][i] = true;
      }
    }
  }
  out.exact = true;
  const auto from_start = reachable_from(g, g.start);
  for (const auto& tr : g.transitions) {
    if (!from_start[static_cast<std::size_t>(tr.source)]) continue;
    // A sum stays clipped exactly unless two different summands can take
    // opposite signs in the same letter.
    for (std::size_t i = 0; i < a; ++i) {
      std::vector<std::pair<bool, bool>> signs{{tr.output[i] > 0, tr.output[i] < 0}};
      for (int r : tr.targets) signs.emplace_back(pos[static_cast<std::size_t>(r)][i], neg[static_cast<std::size_t>(r)][i]);
      for (std::size_t j = 0; j < signs.size(); ++j)
        for (std::size_t k = 0; k < signs.size(); ++k)
          if (j != k && signs[j].first && signs[k].second) out.exact = false;
    }
  }

  std::vector<std::unordered_set<TermVector, TermVectorHash>> lang(n);
  std::vector<std::vector<TermVector>> all(n);
  std::vector<std::vector<TermVector>> delta(n);
  for (const auto& tr : g.transitions) {
    if (!tr.targets.empty() || !in_box(tr.output, window)) continue;
    const auto q = static_cast<std::size_t>(tr.source);
    if (lang[q].insert(tr.output).second) delta[q].push_back(tr.output);
  }
  for (std::size_t q = 0; q < n; ++q) all[q] = delta[q];

  bool changed = true;
  while (changed) {
    std::vector<std::vector<TermVector>> next(n);
    for (const auto& tr : g.transitions) {
      if (tr.targets.empty()) continue;
      const auto q = static_cast<std::size_t>(tr.source);
      const auto& ts = tr.targets;
      // Sums with at least one summand new in the last round: the first new
      // position is `fresh`, earlier positions draw from older elements only.
      for (std::size_t fresh = 0; fresh < ts.size(); ++fresh) {
        std::function<void(std::size_t, const TermVector&)> rec = [&](std::size_t pos_i, const TermVector& acc) {
          if (pos_i == ts.size()) {
            if (in_box(acc, window) && !lang[q].contains(acc)) {
              lang[q].insert(acc);
              next[q].push_back(acc);
            }
            return;
          }
          const auto r = static_cast<std::size_t>(ts[pos_i]);
          if (pos_i == fresh) {
            for (const auto& v : delta[r]) rec(pos_i + 1, acc + v);
          } else if (pos_i < fresh) {
            // Elements known before the last round.
            const std::size_t old = all[r].size() - delta[r].size();
            for (std::size_t k = 0; k < old; ++k) rec(pos_i + 1, acc + all[r][k]);
          } else {
            for (const auto& v : all[r]) rec(pos_i + 1, acc + v);
          }
        };
        rec(0, tr.output);
      }
    }
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      delta[q] = std::move(next[q]);
      if (!delta[q].empty()) changed = true;
      all[q].insert(all[q].end(), delta[q].begin(), delta[q].end());
    }
  }
  const auto s = static_cast<std::size_t>(g.start);
  out.vectors.insert(all[s].begin(), all[s].end());
  return out;
}

}  // namespace parikh
