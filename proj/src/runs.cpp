#include "parikh/runs.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "parikh/errors.hpp"

namespace parikh {

NTVector nt_unit(const Grammar& g, int q, std::int64_t k) {
  NTVector v(g.num_nonterminals(), 0);
  v[static_cast<std::size_t>(q)] = k;
  return v;
}

TransitionMultiset TransitionMultiset::of(const Grammar& g,
                                          std::initializer_list<std::pair<std::size_t, std::int64_t>> items) {
  TransitionMultiset r(g.transitions.size());
  for (auto [id, k] : items) r[id] += k;
  return r;
}

std::int64_t TransitionMultiset::size() const {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

bool TransitionMultiset::contained_in(const TransitionMultiset& other) const {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > other.counts_[i]) return false;
  }
  return true;
}

TransitionMultiset& TransitionMultiset::operator+=(const TransitionMultiset& o) {
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  return *this;
}

TransitionMultiset& TransitionMultiset::operator-=(const TransitionMultiset& o) {
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] -= o.counts_[i];
  return *this;
}

bool multiset_order(const TransitionMultiset& a, const TransitionMultiset& b) {
  const auto sa = a.size();
  const auto sb = b.size();
  if (sa != sb) return sa < sb;
  for (std::size_t i = 0; i < a.num_transitions(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

std::string format_multiset(const TransitionMultiset& r) {
  std::string out;
  for (std::size_t i = 0; i < r.num_transitions(); ++i) {
    if (r[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += transition_label(i) + "*" + std::to_string(r[i]);
  }
  return out.empty() ? "-" : out;
}

TransitionMultiset parse_multiset(std::string_view text, const Grammar& g) {
  TransitionMultiset r(g.transitions.size());
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "-") continue;
    auto star = tok.find('*');
    std::string id_part = tok.substr(0, star);
    std::int64_t count = 1;
    if (star != std::string::npos) {
      auto cs = tok.substr(star + 1);
      auto [p, ec] = std::from_chars(cs.data(), cs.data() + cs.size(), count);
      if (ec != std::errc() || p != cs.data() + cs.size() || count < 0) {
        throw ParseError(1, 1, "bad multiplicity in '" + tok + "'");
      }
    }
    std::size_t id = 0;
    if (id_part.size() < 2 || id_part[0] != 't') throw ParseError(1, 1, "bad transition id '" + tok + "'");
    auto [p, ec] = std::from_chars(id_part.data() + 1, id_part.data() + id_part.size(), id);
    if (ec != std::errc() || p != id_part.data() + id_part.size() || id == 0 || id > g.transitions.size()) {
      throw ParseError(1, 1, "unknown transition '" + id_part + "'");
    }
    r[id - 1] += count;
  }
  return r;
}

RunStats run_stats(const Grammar& g, const TransitionMultiset& r) {
  RunStats s;
  s.source.assign(g.num_nonterminals(), 0);
  s.target.assign(g.num_nonterminals(), 0);
  s.parikh = TermVector(g.num_terminals());
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    const auto k = r[i];
    if (k == 0) continue;
    const auto& t = g.transitions[i];
    s.source[static_cast<std::size_t>(t.source)] += k;
    for (int q : t.targets) s.target[static_cast<std::size_t>(q)] += k;
    s.parikh += t.output * k;
    s.size += k;
  }
  for (std::size_t q = 0; q < s.source.size(); ++q) {
    if (s.source[q] > 0) s.support.push_back(static_cast<int>(q));
  }
  return s;
}

std::uint64_t support_mask(const Grammar& g, const TransitionMultiset& r) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    if (r[i] > 0) mask |= std::uint64_t{1} << g.transitions[i].source;
  }
  return mask;
}

std::string_view to_string(SubrunFailure f) {
  switch (f) {
    case SubrunFailure::none: return "ok";
    case SubrunFailure::negative: return "negative-count";
    case SubrunFailure::euler: return "euler-violation";
    case SubrunFailure::connectivity: return "connectivity-violation";
  }
  return "?";
}

SubrunCheck is_subrun(const Grammar& g, const TransitionMultiset& r, const NTVector& from, const NTVector& to) {
  const std::size_t n = g.num_nonterminals();
  for (auto c : r.counts()) {
    if (c < 0) return {SubrunFailure::negative};
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (from[q] < 0 || to[q] < 0) return {SubrunFailure::negative};
  }
  NTVector source(n, 0);
  NTVector target(n, 0);
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    if (r[i] == 0) continue;
    const auto& t = g.transitions[i];
    source[static_cast<std::size_t>(t.source)] += r[i];
    for (int q : t.targets) target[static_cast<std::size_t>(q)] += r[i];
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (source[q] - from[q] != target[q] - to[q]) return {SubrunFailure::euler};
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack;
  for (std::size_t q = 0; q < n; ++q) {
    if (from[q] > 0) {
      seen[q] = true;
      stack.push_back(static_cast<int>(q));
    }
  }
  while (!stack.empty()) {
    int p = stack.back();
    stack.pop_back();
    for (std::size_t i = 0; i < g.transitions.size(); ++i) {
      const auto& t = g.transitions[i];
      if (r[i] == 0 || t.source != p) continue;
      for (int q : t.targets) {
        if (!seen[static_cast<std::size_t>(q)]) {
          seen[static_cast<std::size_t>(q)] = true;
          stack.push_back(q);
        }
      }
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (source[q] > 0 && !seen[q]) return {SubrunFailure::connectivity};
  }
  return {};
}

bool is_run(const Grammar& g, const TransitionMultiset& r, int p) {
  return static_cast<bool>(is_subrun(g, r, nt_unit(g, p), NTVector(g.num_nonterminals(), 0)));
}

bool is_path(const Grammar& g, const TransitionMultiset& r, int p1, int p2) {
  return static_cast<bool>(is_subrun(g, r, nt_unit(g, p1), nt_unit(g, p2)));
}

bool is_cycle(const Grammar& g, const TransitionMultiset& r, int p) { return is_path(g, r, p, p); }

std::optional<int> cycle_anchor(const Grammar& g, const TransitionMultiset& r) {
  if (r.empty()) return std::nullopt;
  const auto stats = run_stats(g, r);
  if (stats.source != stats.target) return std::nullopt;
  for (int q : stats.support) {
    if (is_cycle(g, r, q)) return q;
  }
  return std::nullopt;
}

std::vector<std::size_t> order_subrun(const Grammar& g, const SubrunCert& cert) {
  if (!is_subrun(g, cert.multiset, cert.from, cert.to)) throw PreconditionError("order_subrun: invalid certificate");
  TransitionMultiset rest = cert.multiset;
  NTVector state = cert.from;
  std::vector<std::size_t> order;
  order.reserve(static_cast<std::size_t>(rest.size()));
  while (!rest.empty()) {
    bool fired = false;
    for (std::size_t i = 0; i < g.transitions.size() && !fired; ++i) {
      const auto& t = g.transitions[i];
      if (rest[i] == 0 || state[static_cast<std::size_t>(t.source)] == 0) continue;
      TransitionMultiset next = rest;
      next[i] -= 1;
      NTVector next_state = state;
      next_state[static_cast<std::size_t>(t.source)] -= 1;
      for (int q : t.targets) next_state[static_cast<std::size_t>(q)] += 1;
      if (is_subrun(g, next, next_state, cert.to)) {
        rest = std::move(next);
        state = std::move(next_state);
        order.push_back(i);
        fired = true;
      }
    }
    if (!fired) throw Error("order_subrun: no enabled transition keeps the remainder a subrun");
  }
  return order;
}

std::size_t DerivationTree::add_child(std::size_t parent, std::size_t transition) {
  vertices_.push_back({transition, parent});
  return vertices_.size() - 1;
}

std::size_t DerivationTree::depth(std::size_t v) const {
  std::size_t d = 0;
  while (vertices_[v].parent) {
    v = *vertices_[v].parent;
    ++d;
  }
  return d;
}

std::size_t DerivationTree::height() const {
  std::size_t h = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) h = std::max(h, depth(v));
  return h;
}

NTVector DerivationTree::free_at(const Grammar& g, std::size_t v) const {
  NTVector f(g.num_nonterminals(), 0);
  for (int q : g.transitions[vertices_[v].transition].targets) f[static_cast<std::size_t>(q)] += 1;
  for (const auto& w : vertices_) {
    if (w.parent == v) f[static_cast<std::size_t>(g.transitions[w.transition].source)] -= 1;
  }
  return f;
}

NTVector DerivationTree::free_total(const Grammar& g) const {
  NTVector total(g.num_nonterminals(), 0);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    auto f = free_at(g, v);
    for (std::size_t q = 0; q < total.size(); ++q) total[q] += f[q];
  }
  return total;
}

bool DerivationTree::well_formed(const Grammar& g, int p) const {
  if (vertices_.empty() || g.transitions[vertices_[0].transition].source != p) return false;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if ((v == 0) != !vertices_[v].parent) return false;
    if (vertices_[v].parent && *vertices_[v].parent >= v) return false;
    auto f = free_at(g, v);
    if (std::any_of(f.begin(), f.end(), [](std::int64_t x) { return x < 0; })) return false;
  }
  return true;
}

DerivationTree subrun_to_tree(const Grammar& g, const SubrunCert& cert) {
  std::int64_t total = 0;
  for (auto c : cert.from) total += c;
  if (total != 1) throw PreconditionError("subrun_to_tree: source must be a single nonterminal");
  if (cert.multiset.empty()) throw PreconditionError("subrun_to_tree: empty multiset has no tree");
  const auto order = order_subrun(g, cert);

  DerivationTree tree(order[0]);
  std::vector<NTVector> free{nt_unit(g, 0, 0)};
  for (int q : g.transitions[order[0]].targets) free[0][static_cast<std::size_t>(q)] += 1;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& t = g.transitions[order[k]];
    const auto src = static_cast<std::size_t>(t.source);
    std::size_t host = 0;
    while (host < free.size() && free[host][src] == 0) ++host;
    if (host == free.size()) throw Error("subrun_to_tree: no vertex offers " + g.nonterminals[src]);
    free[host][src] -= 1;
    tree.add_child(host, order[k]);
    free.push_back(nt_unit(g, 0, 0));
    for (int q : t.targets) free.back()[static_cast<std::size_t>(q)] += 1;
  }
  return tree;
}

TransitionMultiset tree_to_multiset(const Grammar& g, const DerivationTree& t) {
  TransitionMultiset r(g.transitions.size());
  for (const auto& v : t.vertices()) r[v.transition] += 1;
  return r;
}

BigInt gamma_bound(std::uint64_t depth, bool regular) {
  if (regular) return BigInt(depth) + 1;
  BigInt one = 1;
  return one << static_cast<unsigned>(depth + 1);
}

std::int64_t gamma_limit(std::uint64_t depth, bool regular, std::int64_t ceiling) {
  const BigInt v = gamma_bound(depth, regular);
  return v > ceiling ? ceiling : static_cast<std::int64_t>(v);
}

namespace {

struct Budget {
  std::uint64_t used = 0;
  std::uint64_t limit;
  void tick() {
    if (++used > limit) throw CapExceeded("search exceeded " + std::to_string(limit) + " candidates");
  }
};

}  // namespace

void for_each_submultiset(const TransitionMultiset& r, std::int64_t max_size, const SearchLimits& limits,
                          const std::function<bool(const TransitionMultiset&)>& visit) {
  const std::size_t n = r.num_transitions();
  std::vector<std::int64_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + r[i];
  Budget budget{0, limits.max_candidates};
  TransitionMultiset cur(n);
  bool stop = false;
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (stop) return;
    if (left == 0) {
      budget.tick();
      if (!visit(cur)) stop = true;
      return;
    }
    if (i == n || suffix[i] < left) return;
    for (std::int64_t k = std::min(left, r[i]); k >= 0 && !stop; --k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  const std::int64_t top = std::min(max_size, r.size());
  for (std::int64_t s = 0; s <= top && !stop; ++s) rec(0, s);
}

bool is_simple_cycle(const Grammar& g, const TransitionMultiset& c, int q, const SearchLimits& limits) {
  if (c.empty() || !is_cycle(g, c, q)) return false;
  bool simple = true;
  const auto whole = c.size();
  for_each_submultiset(c, whole - 1, limits, [&](const TransitionMultiset& part) {
    if (part.empty()) return true;
    if (is_cycle(g, part, q) && cycle_anchor(g, c - part)) {
      simple = false;
      return false;
    }
    return true;
  });
  return simple;
}

bool is_skeleton_run(const Grammar& g, const TransitionMultiset& r, int p, const SearchLimits& limits) {
  if (!is_run(g, r, p)) throw PreconditionError("is_skeleton_run: not a run");
  const auto mask = support_mask(g, r);
  bool skeleton = true;
  for_each_submultiset(r, r.size() - 1, limits, [&](const TransitionMultiset& base) {
    if (base.empty() || support_mask(g, base) != mask) return true;
    if (is_run(g, base, p) && cycle_anchor(g, r - base)) {
      skeleton = false;
      return false;
    }
    return true;
  });
  return skeleton;
}

std::vector<bool> reachable_from(const Grammar& g, int q) {
  std::vector<bool> seen(g.num_nonterminals(), false);
  std::vector<int> stack{q};
  seen[static_cast<std::size_t>(q)] = true;
  while (!stack.empty()) {
    int p = stack.back();
    stack.pop_back();
    for (const auto& t : g.transitions) {
      if (t.source != p) continue;
      for (int r : t.targets) {
        if (!seen[static_cast<std::size_t>(r)]) {
          seen[static_cast<std::size_t>(r)] = true;
          stack.push_back(r);
        }
      }
    }
  }
  return seen;
}

void for_each_balanced_multiset(const Grammar& g, const std::vector<bool>& allowed, std::int64_t max_size,
                                const NTVector& balance, const SearchLimits& limits,
                                const std::function<bool(const TransitionMultiset&)>& visit) {
  const std::size_t m = g.transitions.size();
  const std::size_t n = g.num_nonterminals();
  // can_consume[i][q]: some allowed transition with id >= i has source q;
  // can_produce[i][q]: some allowed transition with id >= i targets q.
  std::vector<std::vector<bool>> can_consume(m + 1, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> can_produce(m + 1, std::vector<bool>(n, false));
  std::int64_t max_change = 1;
  for (std::size_t i = m; i-- > 0;) {
    can_consume[i] = can_consume[i + 1];
    can_produce[i] = can_produce[i + 1];
    if (!allowed[i]) continue;
    const auto& t = g.transitions[i];
    can_consume[i][static_cast<std::size_t>(t.source)] = true;
    for (int q : t.targets) can_produce[i][static_cast<std::size_t>(q)] = true;
    max_change = std::max<std::int64_t>(max_change, 1 + static_cast<std::int64_t>(t.targets.size()));
  }

  Budget budget{0, limits.max_candidates};
  TransitionMultiset cur(m);
  NTVector diff(n, 0);  // target - source so far
  bool stop = false;

  auto feasible = [&](std::size_t i, std::int64_t left) {
    std::int64_t deficit = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const auto d = balance[q] - diff[q];
      deficit += d < 0 ? -d : d;
      if (d < 0 && !can_consume[i][q]) return false;
      if (d > 0 && !can_produce[i][q]) return false;
    }
    return deficit <= left * max_change;
  };

  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (stop) return;
    budget.tick();
    if (left == 0) {
      if (diff == balance && !visit(cur)) stop = true;
      return;
    }
    if (i == m || !feasible(i, left)) return;
    if (!allowed[i]) {
      rec(i + 1, left);
      return;
    }
    const auto& t = g.transitions[i];
    const auto src = static_cast<std::size_t>(t.source);
    auto apply = [&](std::int64_t k) {
      diff[src] -= k;
      for (int q : t.targets) diff[static_cast<std::size_t>(q)] += k;
    };
    apply(left);
    for (std::int64_t k = left; k >= 0 && !stop; --k) {
      cur[i] = k;
      rec(i + 1, left - k);
      apply(-1);
    }
    apply(1);  // loop overshoots by one step
    cur[i] = 0;
  };
  for (std::int64_t s = 0; s <= max_size && !stop; ++s) rec(0, s);
}

}  // namespace parikh
