// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "parikh/decomposition.hpp"
#include "parikh/errors.hpp"
#include "parikh/hardness.hpp"
#include "parikh/membership.hpp"
#include "parikh/semilinear.hpp"
#include "parikh/window.hpp"
#include "support.hpp"

using namespace parikh;
using testkit::Rng;
using testkit::uniform;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; only the first few are kept for the report.
class Tally {
 public:
  void fail(const std::string& what) {
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  Outcome outcome(std::string detail) const {
    Outcome o{failures_ == 0, std::move(detail)};
    if (failures_ > 0) {
      o.detail += "; " + std::to_string(failures_) + " failures";
      for (const auto& n : notes_) o.detail += " [" + n + "]";
    }
    return o;
  }

 private:
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

std::string show(const TermVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + ")";
}

int pick(Rng& rng, int lo, int hi) { return static_cast<int>(uniform(rng, lo, hi)); }

Grammar random_normal_form(Rng& rng, int max_n, int max_a, bool regular, bool negative) {
  const int n = pick(rng, 1, max_n);
  return testkit::random_grammar(rng, {n, pick(rng, 1, max_a), regular, negative, pick(rng, n + 1, 2 * n + 3)});
}

NTVector random_from(const Grammar& g, Rng& rng) {
  NTVector from(g.num_nonterminals(), 0);
  from[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(g.num_nonterminals()) - 1))] += 1;
  if (testkit::coin(rng, 0.3)) from[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(g.num_nonterminals()) - 1))] += 1;
  return from;
}

// consumed - produced per nonterminal.
NTVector net_consumption(const Grammar& g, const TransitionMultiset& r) {
  NTVector net(g.num_nonterminals(), 0);
  for (std::size_t i = 0; i < g.transitions.size(); ++i) {
    net[static_cast<std::size_t>(g.transitions[i].source)] += r[i];
    for (int q : g.transitions[i].targets) net[static_cast<std::size_t>(q)] -= r[i];
  }
  return net;
}

// Independence through the Gram determinant.
bool independent(const std::vector<TermVector>& vs) {
  std::vector<std::vector<long long>> gram(vs.size(), std::vector<long long>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      long long dot = 0;
      for (std::size_t d = 0; d < vs[i].dim(); ++d) dot += vs[i][d] * vs[j][d];
      gram[i][j] = dot;
    }
  return testkit::cofactor_det(gram) != 0;
}

Outcome euler_ordering() {
  Rng rng(1001);
  Tally t;
  int valid = 0;
  std::map<std::string, int> invalid;
  int total_invalid = 0;
  while (valid < 600 || total_invalid < 600) {
    const auto g = random_normal_form(rng, 5, 2, testkit::coin(rng), testkit::coin(rng));
    const auto sim = testkit::simulate(g, rng, random_from(g, rng), pick(rng, 0, 20));
    if (valid < 600) {
      ++valid;
      t.expect(static_cast<bool>(is_subrun(g, sim.multiset, sim.from, sim.to)), "simulated subrun rejected");
      const auto order = order_subrun(g, {sim.multiset, sim.from, sim.to});
      t.expect(testkit::replay(g, sim.from, sim.to, sim.multiset, order), "firing order does not replay");
    }
    // Three ways to break a subrun: negative counts, unbalanced counts, and
    // balanced counts whose support is not reachable from the start.
    TransitionMultiset m(g.transitions.size());
    NTVector from = random_from(g, rng);
    NTVector to(g.num_nonterminals(), 0);
    switch (pick(rng, 0, 2)) {
      case 0:
        m = sim.multiset;
        m[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(m.num_transitions()) - 1))] = -pick(rng, 1, 2);
        from = sim.from;
        to = sim.to;
        break;
      case 1:
        m = sim.multiset;
        m[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(m.num_transitions()) - 1))] += 1;
        from = sim.from;
        to = sim.to;
        break;
      default: {
        for (std::size_t i = 0; i < m.num_transitions(); ++i) m[i] = testkit::coin(rng, 0.4) ? pick(rng, 1, 3) : 0;
        const auto net = net_consumption(g, m);
        for (std::size_t q = 0; q < to.size(); ++q) {
          if (from[q] - net[q] < 0) from[q] = net[q];
          to[q] = from[q] - net[q];
        }
      }
    }
    const auto expect = testkit::reference_subrun_reason(g, m, from, to);
    if (expect == "ok") continue;
    ++total_invalid;
    ++invalid[expect];
    const auto got = is_subrun(g, m, from, to).reason;
    t.expect(to_string(got) == expect, "reason " + std::string(to_string(got)) + " expected " + expect);
  }
  std::ostringstream d;
  d << valid << " valid subruns ordered, " << total_invalid << " invalid multisets (";
  bool first = true;
  for (const auto& [reason, count] : invalid) {
    d << (first ? "" : ", ") << reason << " " << count;
    first = false;
  }
  d << ")";
  auto o = t.outcome(d.str());
  if (invalid.size() < 3) {
    o.pass = false;
    o.detail += "; not every failure reason was exercised";
  }
  return o;
}

Outcome derivation_round_trip() {
  Rng rng(1002);
  Tally t;
  std::map<std::string, int> kinds;
  int total = 0;
  while (kinds["run"] < 80 || kinds["path"] < 80 || kinds["cycle"] < 80) {
    const bool whole_run = testkit::coin(rng);
    const auto g = random_normal_form(rng, 4, 2, !whole_run || testkit::coin(rng), testkit::coin(rng));
    const int p = pick(rng, 0, static_cast<int>(g.num_nonterminals()) - 1);
    testkit::Simulation sim;
    if (whole_run) {
      auto run = testkit::random_run(g, rng, p, pick(rng, 1, 14));
      if (!run) continue;
      sim = *run;
    } else {
      sim = testkit::simulate(g, rng, nt_unit(g, p), pick(rng, 1, 14));
    }
    if (sim.multiset.empty()) continue;
    std::int64_t pending = 0;
    int q2 = -1;
    for (std::size_t q = 0; q < sim.to.size(); ++q) {
      pending += sim.to[q];
      if (sim.to[q] > 0) q2 = static_cast<int>(q);
    }
    std::string kind;
    if (pending == 0) {
      kind = "run";
    } else if (pending == 1) {
      kind = q2 == p ? "cycle" : "path";
    } else {
      continue;
    }
    if (kinds[kind] >= 80) continue;
    ++total;
    ++kinds[kind];
    const SubrunCert cert{sim.multiset, sim.from, sim.to};
    const auto tree = subrun_to_tree(g, cert);
    t.expect(tree_to_multiset(g, tree) == sim.multiset, "round trip changed the multiset");
    t.expect(static_cast<std::int64_t>(tree.size()) == sim.multiset.size(), "vertex count differs");
    t.expect(g.transitions[tree.vertex(0).transition].source == p, "root is not labeled by the start");
    // F(v) = targets(v) - sources of the children, recomputed here.
    NTVector total_free(g.num_nonterminals(), 0);
    std::vector<NTVector> free(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) {
      free[v] = NTVector(g.num_nonterminals(), 0);
      for (int q : g.transitions[tree.vertex(v).transition].targets) free[v][static_cast<std::size_t>(q)] += 1;
    }
    for (std::size_t v = 1; v < tree.size(); ++v) {
      const auto parent = tree.vertex(v).parent;
      if (!parent || *parent >= v) {
        t.fail("parent index out of order");
        continue;
      }
      free[*parent][static_cast<std::size_t>(g.transitions[tree.vertex(v).transition].source)] -= 1;
    }
    for (std::size_t v = 0; v < tree.size(); ++v) {
      t.expect(free[v] == tree.free_at(g, v), "F(v) mismatch");
      for (std::size_t q = 0; q < free[v].size(); ++q) {
        t.expect(free[v][q] >= 0, "negative F(v)");
        total_free[q] += free[v][q];
      }
    }
    t.expect(total_free == sim.to, "free symbols differ from the subrun target");
  }
  return t.outcome(std::to_string(total) + " round trips (runs " + std::to_string(kinds["run"]) + ", paths " +
                   std::to_string(kinds["path"]) + ", cycles " + std::to_string(kinds["cycle"]) + ")");
}

bool reference_skeleton(const Grammar& g, const TransitionMultiset& r, int p) {
  const auto mask = support_mask(g, r);
  bool reducible = false;
  testkit::each_submultiset(r, [&](const TransitionMultiset& base) {
    if (reducible || base.empty() || base == r || support_mask(g, base) != mask) return;
    if (!testkit::reference_run(g, base, p)) return;
    const auto rest = r - base;
    for (int q = 0; q < static_cast<int>(g.num_nonterminals()) && !reducible; ++q)
      reducible = testkit::reference_cycle(g, rest, q);
  });
  return !reducible;
}

Outcome size_bounds() {
  constexpr std::int64_t run_size_cap = 40;
  Rng rng(1003);
  Tally t;
  int grammars = 0, cycles = 0, runs = 0, skipped = 0;
  for (int n = 1; n <= 3; ++n) {
    for (bool regular : {true, false}) {
      for (int i = 0; i < 6; ++i) {
        const auto g = testkit::random_grammar(rng, {n, 1, regular, false, n + 3});
        ++grammars;
        const bool reg = classify(g).regular;
        const auto nn = static_cast<std::uint64_t>(n);
        const auto gc = gamma_limit(nn, reg, 1'000'000);
        const auto gs = gamma_limit(nn * nn, reg, 1'000'000);
        testkit::each_multiset_of_size(g.transitions.size(), static_cast<int>(gc), static_cast<int>(gc) + 1,
                                       [&](const TransitionMultiset& c) {
                                         for (int q = 0; q < n; ++q) {
                                           if (!testkit::reference_cycle(g, c, q)) continue;
                                           ++cycles;
                                           t.expect(!testkit::reference_simple_cycle(g, c, q),
                                                    "simple cycle of size " + std::to_string(c.size()));
                                           t.expect(!is_simple_cycle(g, c, q), "is_simple_cycle accepts a long cycle");
                                         }
                                       });
        if (gs + 1 > run_size_cap) {
          ++skipped;
          continue;
        }
        testkit::each_multiset_of_size(g.transitions.size(), static_cast<int>(gs), static_cast<int>(gs) + 1,
                                       [&](const TransitionMultiset& r) {
                                         for (int p = 0; p < n; ++p) {
                                           if (!testkit::reference_run(g, r, p)) continue;
                                           ++runs;
                                           t.expect(!reference_skeleton(g, r, p),
                                                    "skeleton run of size " + std::to_string(r.size()));
                                         }
                                       });
      }
    }
  }
  return t.outcome(std::to_string(grammars) + " grammars, " + std::to_string(cycles) + " cycles of size gamma(N)..+1, " +
                   std::to_string(runs) + " runs of size gamma(N^2)..+1 checked; " + std::to_string(skipped) +
                   " grammars with gamma(N^2) above " + std::to_string(run_size_cap) + " checked for cycles only");
}

Outcome decomposition_validity() {
  Rng rng(1004);
  Tally t;
  int runs = 0, with_cycles = 0;
  while (runs < 320 || with_cycles < 150) {
    const auto g = random_normal_form(rng, 3, 2, testkit::coin(rng), testkit::coin(rng));
    auto run = testkit::random_run(g, rng, 0, pick(rng, 6, 30));
    if (!run) continue;
    ++runs;
    const auto d = decompose_run(g, run->multiset, 0);
    TermVector sum = testkit::parikh_of(g, d.base_run);
    std::vector<TermVector> psis;
    const auto base_nts = run_stats(g, d.base_run).source;
    for (const auto& c : d.cycles) {
      const auto psi = testkit::parikh_of(g, c.cycle);
      t.expect(c.multiplicity > 0, "zero multiplicity");
      sum += psi * static_cast<std::int64_t>(c.multiplicity);
      psis.push_back(psi);
      t.expect(base_nts[static_cast<std::size_t>(c.anchor)] > 0, "anchor outside supp(R1)");
      t.expect(testkit::reference_simple_cycle(g, c.cycle, c.anchor), "cycle is not simple");
    }
    if (!d.cycles.empty()) ++with_cycles;
    t.expect(sum == testkit::parikh_of(g, run->multiset), "Parikh vector changed");
    t.expect(independent(psis), "cycle vectors are dependent");
    t.expect(testkit::reference_run(g, d.base_run, 0), "R1 is not a run");
    t.expect(BigInt(d.base_run.size()) <= compute_bg(g).value, "|R1| exceeds B_G");
  }
  return t.outcome(std::to_string(runs) + " runs decomposed, " + std::to_string(with_cycles) + " with cycles");
}

Outcome regular_membership() {
  constexpr std::int64_t window = 12;
  Rng rng(1005);
  Tally t;
  int grammars = 0, rejected = 0;
  std::size_t vectors = 0, members = 0;
  while (grammars < 50) {
    const int n = pick(rng, 1, 4);
    const int letters = pick(rng, 1, 2);
    const auto g = testkit::random_grammar(rng, {n, letters, true, testkit::coin(rng), pick(rng, n + 1, 2 * n + 2)});
    const auto lang = oracle_language(g, 14, window);
    if (lang != oracle_language(g, 28, window)) {
      ++rejected;
      continue;
    }
    ++grammars;
    const auto bg = compute_bg(g).value;
    const std::int64_t bound = bg < 200 ? static_cast<std::int64_t>(bg) : 200;
    const RegularMembership m(g, bound);
    for_each_in_box(static_cast<std::size_t>(letters), -window, window, [&](const TermVector& v) {
      ++vectors;
      const auto r = m.query(v);
      const bool yes = r.answer == Answer::yes;
      members += yes;
      t.expect(yes == lang.contains(v), "disagreement at " + show(v));
      return true;
    });
  }
  return t.outcome(std::to_string(grammars) + " stable grammars (" + std::to_string(rejected) + " unstable skipped), " +
                   std::to_string(vectors) + " vectors, " + std::to_string(members) + " members");
}

Outcome general_soundness() {
  constexpr std::int64_t window = 6;
  Rng rng(1006);
  Tally t;
  int grammars = 0, negative = 0;
  std::size_t accepts = 0;
  while (grammars < 110) {
    const bool neg = grammars % 2 == 0;
    const auto g = random_normal_form(rng, 3, 2, testkit::coin(rng, 0.3), neg);
    ++grammars;
    negative += neg;
    const GeneralMembership m(g, GeneralCaps{});
    for_each_in_box(g.num_terminals(), -window, window, [&](const TermVector& v) {
      const auto r = m.query(v);
      if (r.answer != Answer::yes) return true;
      ++accepts;
      if (!r.witness) {
        t.fail("accept without witness");
        return true;
      }
      const auto run = r.witness->expand();
      t.expect(static_cast<bool>(is_subrun(g, run, nt_unit(g, g.start), NTVector(g.num_nonterminals(), 0))),
               "witness is not a run at " + show(v));
      t.expect(testkit::reference_run(g, run, g.start), "witness fails the reference check at " + show(v));
      t.expect(testkit::parikh_of(g, run) == v, "witness Parikh vector differs at " + show(v));
      return true;
    });
  }
  return t.outcome(std::to_string(grammars) + " grammars (" + std::to_string(negative) + " with negative outputs), " +
                   std::to_string(accepts) + " accepted vectors verified");
}

Outcome linear_sets() {
  Rng rng(1007);
  Tally t;
  int yes = 0, deep = 0;
  for (int i = 0; i < 1200; ++i) {
    const TermVector base{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    std::vector<TermVector> periods;
    const auto k = uniform(rng, 0, 3);
    for (int j = 0; j < k; ++j) periods.push_back(TermVector{uniform(rng, -3, 3), uniform(rng, -3, 3)});
    const TermVector v{uniform(rng, -6, 6), uniform(rng, -6, 6)};
    const bool expect = testkit::enumerate_linear(base, periods, 12, v);
    yes += expect;
    const bool got = linear_member({base, periods}, v);
    if (got != expect && got && testkit::enumerate_linear(base, periods, 40, v)) ++deep;
    t.expect(got == expect, "disagreement at base " + show(base) + " v " + show(v));
  }
  auto o = t.outcome("1200 instances, " + std::to_string(yes) + " members within coefficient 12");
  if (deep > 0) o.detail += "; " + std::to_string(deep) + " disagreements are members needing a coefficient above 12";
  return o;
}

Outcome hard_family() {
  Tally t;
  std::string detail;
  for (int n = 0; n <= 2; ++n) {
    const auto g = gen_hard_grammar(n, HardVariant::stripped);
    const std::int64_t top = (std::int64_t{1} << n) - 1;
    const auto closure = oracle_window_closure(g, top * (top + 1) / 2 + 2);
    t.expect(closure.exact, "window enumeration not exact for n=" + std::to_string(n));
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (const auto& v : closure.vectors) pts.emplace_back(v[0], v[1]);
    auto hull = convex_hull_vertices(pts);
    std::sort(hull.begin(), hull.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> expect, swapped;
    for (std::int64_t i = 0; i <= top; ++i) {
      expect.emplace_back(i, i * (i + 1) / 2);
      swapped.emplace_back(i * (i + 1) / 2, i);
    }
    std::sort(swapped.begin(), swapped.end());
    t.expect(hull.size() == (std::size_t{1} << n), "hull size for n=" + std::to_string(n));
    t.expect(hull == expect || hull == swapped, "hull vertices for n=" + std::to_string(n));
    detail += (detail.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ": " + std::to_string(hull.size()) + " vertices");
  }
  return t.outcome(detail + " (coordinates in (x, y) = (i(i+1)/2, i) order)");
}

std::vector<CnfFormula> formula_family() {
  Rng rng(1009);
  std::vector<CnfFormula> out;
  std::set<std::string> seen;
  for (int k = 0; k <= 3; ++k) {
    for (int l = 0; k + l <= 3; ++l) {
      for (int m = 0; m <= 3; ++m) {
        for (int sample = 0; sample < 16; ++sample) {
          CnfFormula f;
          f.num_x = k;
          f.num_y = l;
          if (k + l == 0 && m > 0) break;
          for (int j = 0; j < m; ++j) {
            std::vector<Literal> clause;
            const int width = pick(rng, 1, std::min(3, k + l));
            std::vector<int> vars;
            while (static_cast<int>(vars.size()) < width) {
              const int var = pick(rng, 0, k + l - 1);
              if (std::find(vars.begin(), vars.end(), var) == vars.end()) vars.push_back(var);
            }
            for (int var : vars) clause.push_back({var < k, var < k ? var : var - k, testkit::coin(rng)});
            f.clauses.push_back(std::move(clause));
          }
          if (seen.insert(format_formula(f)).second) out.push_back(std::move(f));
        }
      }
    }
  }
  return out;
}

std::vector<Graph> small_graphs() {
  std::vector<Graph> out;
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
      Graph gr;
      for (int v = 0; v < n; ++v) gr.vertices.push_back("v" + std::to_string(v));
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1u) gr.edges.push_back(slots[s]);
      out.push_back(std::move(gr));
    }
  }
  return out;
}

Outcome reductions() {
  Tally t;
  EngineOptions o;
  o.engine = Engine::closure;
  const auto formulas = formula_family();
  int incl = 0, univ = 0, sat = 0, unary = 0, ham = 0;
  int qbf_true = 0, sat_true = 0, ham_true = 0;
  for (const auto& f : formulas) {
    const std::int64_t window = (std::int64_t{1} << f.num_x) << (2 * f.clauses.size());
    const bool holds = qbf_holds(f);
    qbf_true += holds;
    const auto text = format_formula(f);
    const auto pair = encode_qsat2_inclusion(f);
    const auto inc = compare_within_window(pair.g1, pair.g2, window, CompareMode::inclusion, o);
    ++incl;
    t.expect(inc.result == (holds ? WindowResult::holds : WindowResult::fails), "qsat2 inclusion: " + text);
    const auto u = universality_within_window(encode_qsat2_universality(f), window, Ambient::integers, o);
    ++univ;
    t.expect(u.result == (holds ? WindowResult::holds : WindowResult::fails), "qsat2 universality: " + text);

    const bool satisfiable = cnf_satisfiable(f);
    sat_true += satisfiable;
    if (f.num_x == 0) {
      const auto inst = encode_3sat_membership(f);
      const auto answer = WindowMembership(inst.grammar, inst.vector.norm_inf(), o).query(inst.vector);
      ++sat;
      t.expect(answer == (satisfiable ? Answer::yes : Answer::no), "3sat membership: " + text);
    }
    const auto ug = encode_3sat_unary_universality(f, {2, 3, 5});
    const auto uv = universality_within_window(ug, 30, Ambient::naturals, o);
    ++unary;
    t.expect(uv.result == (satisfiable ? WindowResult::fails : WindowResult::holds), "unary sat: " + text);
  }
  for (const auto& gr : small_graphs()) {
    const auto inst = encode_hamiltonian_membership(gr, gr.vertices[0]);
    const bool expect = has_hamiltonian_circuit(gr, gr.vertices[0]);
    ham_true += expect;
    const auto answer = WindowMembership(inst.grammar, 1, o).query(inst.vector);
    ++ham;
    t.expect(answer == (expect ? Answer::yes : Answer::no), "hamiltonian on " + std::to_string(gr.vertices.size()) +
                                                                 " vertices, " + std::to_string(gr.edges.size()) + " edges");
  }
  std::ostringstream d;
  d << formulas.size() << " formulas (" << qbf_true << " true QBF, " << sat_true << " satisfiable): inclusion " << incl
    << ", universality " << univ << ", 3sat membership " << sat << ", unary sat " << unary << "; " << ham
    << " graphs (" << ham_true << " hamiltonian)";
  return t.outcome(d.str());
}

Outcome linear_algebra() {
  Rng rng(1010);
  Tally t;
  for (int i = 0; i < 500; ++i) {
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 6));
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
    long long largest = 0;
    for (auto& row : m)
      for (auto& x : row) {
        x = uniform(rng, -9, 9);
        largest = std::max(largest, x < 0 ? -x : x);
      }
    const auto det = determinant(testkit::to_matrix(m));
    t.expect(det == testkit::cofactor_det(m), "determinant mismatch");
    t.expect(abs(det) <= hadamard_bound(n, largest), "Hadamard bound violated");
  }
  int detgroup = 0;
  while (detgroup < 200) {
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 4));
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
    for (auto& row : m)
      for (auto& x : row) x = uniform(rng, -5, 5);
    const auto det = testkit::cofactor_det(m);
    if (det == 0) continue;
    ++detgroup;
    std::vector<BigInt> b(n);
    for (auto& x : b) x = det * uniform(rng, -7, 7);
    const auto x = cramer_solve(testkit::to_matrix(m), b);
    if (!x) {
      t.fail("cramer_solve rejected a nonsingular matrix");
      continue;
    }
    for (std::size_t r = 0; r < n; ++r) {
      Rational row = 0;
      for (std::size_t c = 0; c < n; ++c) row += Rational(m[r][c]) * (*x)[c];
      t.expect(row == Rational(b[r]), "cramer_solve result does not solve the system");
    }
    for (const auto& xi : *x) t.expect(denominator(xi) == 1, "(det M) z has no integer preimage");
  }
  for (int i = 0; i < 200; ++i) {
    const auto dim = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto k = uniform(rng, 1, 5);
    std::vector<TermVector> P;
    std::vector<BigInt> n;
    for (int j = 0; j < k; ++j) {
      TermVector p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = uniform(rng, -2, 2);
      P.push_back(p);
      n.push_back(uniform(rng, 0, 80));
    }
    const auto r = reduce_multiplicities(P, n, 2);
    std::vector<BigInt> before(dim, 0), after(dim, 0);
    for (int j = 0; j < k; ++j)
      for (std::size_t d = 0; d < dim; ++d) {
        before[d] += n[static_cast<std::size_t>(j)] * P[static_cast<std::size_t>(j)][d];
        after[d] += r.coefficients[static_cast<std::size_t>(j)] * P[static_cast<std::size_t>(j)][d];
      }
    t.expect(before == after, "reduction changed the sum");
    std::vector<TermVector> p0;
    for (auto idx : r.independent) p0.push_back(P[idx]);
    t.expect(independent(p0), "P0 is dependent");
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      t.expect(r.coefficients[j] >= 0, "negative coefficient");
      const bool in_p0 = std::find(r.independent.begin(), r.independent.end(), j) != r.independent.end();
      if (!in_p0) t.expect(r.coefficients[j] <= r.bound, "coefficient above H outside P0");
    }
  }
  return t.outcome("500 determinants, 200 detgroup instances, 200 reductions");
}

Outcome disjointness() {
  Rng rng(1011);
  Tally t;
  EngineOptions dp;
  dp.engine = Engine::regular_dp;
  int pairs = 0, disjoint = 0;
  while (pairs < 50) {
    const auto g1 = testkit::random_grammar(rng, {pick(rng, 1, 2), 1, true, testkit::coin(rng), pick(rng, 2, 4)});
    const auto g2 = testkit::random_grammar(rng, {pick(rng, 1, 2), 1, true, testkit::coin(rng), pick(rng, 2, 4)});
    ++pairs;
    const auto report = window_bound_report(g1, g2);
    const auto bg = std::max(report.bg1.value, report.bg2.value);
    const auto window = static_cast<std::int64_t>(bg) + 2;
    const auto sweep = compare_within_window(g1, g2, window, CompareMode::disjointness, dp);
    const auto zero = member_regular(difference_grammar(g1, g2), TermVector(1));
    t.expect(zero.answer == Answer::yes || zero.answer == Answer::no, "difference membership was not exact");
    const bool sweep_disjoint = sweep.result == WindowResult::holds;
    disjoint += sweep_disjoint;
    t.expect(sweep_disjoint == (zero.answer == Answer::no), "pair " + std::to_string(pairs) + " disagrees");
  }
  return t.outcome(std::to_string(pairs) + " pairs, " + std::to_string(disjoint) + " disjoint");
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "euler ordering", 30, euler_ordering},
      {2, "derivation trees", 10, derivation_round_trip},
      {3, "size bounds", 300, size_bounds},
      {4, "decomposition", 60, decomposition_validity},
      {5, "regular membership", 120, regular_membership},
      {6, "general membership soundness", 300, general_soundness},
      {7, "linear sets", 10, linear_sets},
      {8, "hard family hulls", 30, hard_family},
      {9, "reductions", 300, reductions},
      {10, "linear algebra", 20, linear_algebra},
      {11, "disjointness", 300, disjointness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit";
    }
    failed += !o.pass;
    std::printf("%s criterion %2d %-30s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name, seconds,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
