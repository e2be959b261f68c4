#include "parikh/hardness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "parikh/errors.hpp"

namespace parikh {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(std::string_view line, char mark) {
  const auto pos = line.find(mark);
  return std::string(pos == std::string_view::npos ? line : line.substr(0, pos));
}

std::optional<std::int64_t> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
    if (v > 1'000'000) return std::nullopt;
  }
  return v;
}

// Accumulates rules by symbol name; a right-hand-side symbol becomes a target
// when it names a nonterminal and an output letter otherwise.
class RuleSet {
 public:
  void rule(std::string source, std::vector<std::pair<std::string, std::int64_t>> rhs) {
    rules_.push_back({std::move(source), std::move(rhs)});
  }

  Grammar build(const std::vector<std::string>& alphabet, const std::vector<std::string>& nonterminals,
                const std::string& start, const std::vector<std::string>& erased = {}) const {
    Grammar g;
    g.alphabet = alphabet;
    g.nonterminals = nonterminals;
    g.start = g.nonterminal_index(start);
    for (const auto& [source, rhs] : rules_) {
      Transition t;
      t.source = g.nonterminal_index(source);
      if (t.source < 0) continue;
      t.output = TermVector(alphabet.size());
      for (const auto& [sym, k] : rhs) {
        if (const int q = g.nonterminal_index(sym); q >= 0) {
          for (std::int64_t i = 0; i < k; ++i) t.targets.push_back(q);
        } else if (const int a = g.terminal_index(sym); a >= 0) {
          t.output[static_cast<std::size_t>(a)] += k;
        } else if (std::find(erased.begin(), erased.end(), sym) == erased.end()) {
          throw Error("hardness: symbol '" + sym + "' is neither declared nor erased");
        }
      }
      std::sort(t.targets.begin(), t.targets.end());
      g.transitions.push_back(std::move(t));
    }
    validate(g);
    return g;
  }

 private:
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::int64_t>>>> rules_;
};

std::string idx(const char* base, int i) { return base + std::to_string(i); }

bool has_literal(const std::vector<Literal>& clause, bool universal, int index, bool negated) {
  return std::any_of(clause.begin(), clause.end(), [&](const Literal& l) {
    return l.universal == universal && l.index == index && l.negated == negated;
  });
}

bool satisfied(const CnfFormula& f, std::uint64_t xs, std::uint64_t ys) {
  for (const auto& clause : f.clauses) {
    bool ok = false;
    for (const auto& l : clause) {
      const bool value = ((l.universal ? xs : ys) >> l.index) & 1;
      if (value != l.negated) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

// Rules shared by the inclusion and universality encodings.
RuleSet qsat_core(const CnfFormula& f, std::vector<std::string>& nts) {
  validate(f);
  const int k = f.num_x;
  const int l = f.num_y;
  const int m = static_cast<int>(f.clauses.size());
  RuleSet rs;
  nts = {"S1", "S2"};
  for (int i = 0; i < k; ++i) {
    nts.push_back(idx("A", i));
    nts.push_back(idx("Aopt", i));
    nts.push_back(idx("X", i));
  }
  for (int i = 0; i < l; ++i) nts.push_back(idx("Y", i));
  for (int j = 0; j < m; ++j) {
    nts.push_back(idx("C", j));
    nts.push_back(idx("Copt", j));
  }

  std::vector<std::pair<std::string, std::int64_t>> s1;
  for (int i = 0; i < k; ++i) s1.emplace_back(idx("Aopt", i), 1);
  for (int j = 0; j < m; ++j) s1.emplace_back(idx("C", j), 1);
  rs.rule("S1", s1);

  std::vector<std::pair<std::string, std::int64_t>> s2;
  for (int i = 0; i < k; ++i) s2.emplace_back(idx("X", i), 1);
  for (int i = 0; i < l; ++i) s2.emplace_back(idx("Y", i), 1);
  rs.rule("S2", s2);

  for (int i = 0; i < k; ++i) {
    if (i == 0) {
      rs.rule("A0", {{"a", 1}});
    } else {
      rs.rule(idx("A", i), {{idx("A", i - 1), 2}});
    }
    rs.rule(idx("Aopt", i), {});
    rs.rule(idx("Aopt", i), {{idx("A", i), 1}});
  }
  for (int j = 0; j < m; ++j) {
    if (j == 0) {
      if (k == 0) {
        rs.rule("C0", {{"a", 1}});
      } else {
        rs.rule("C0", {{idx("A", k - 1), 2}});
      }
    } else {
      rs.rule(idx("C", j), {{idx("C", j - 1), 4}});
    }
    rs.rule(idx("Copt", j), {});
    rs.rule(idx("Copt", j), {{idx("C", j), 1}});
  }
  auto covering = [&](bool universal, int i, bool negated) {
    std::vector<std::pair<std::string, std::int64_t>> rhs;
    for (int j = 0; j < m; ++j) {
      if (has_literal(f.clauses[static_cast<std::size_t>(j)], universal, i, negated)) {
        rhs.emplace_back(idx("Copt", j), 1);
      }
    }
    return rhs;
  };
  for (int i = 0; i < k; ++i) {
    auto pos = covering(true, i, false);
    pos.emplace_back(idx("A", i), 1);
    rs.rule(idx("X", i), pos);
    rs.rule(idx("X", i), covering(true, i, true));
  }
  for (int i = 0; i < l; ++i) {
    rs.rule(idx("Y", i), covering(false, i, false));
    rs.rule(idx("Y", i), covering(false, i, true));
  }
  return rs;
}

}  // namespace

void validate(const CnfFormula& f) {
  if (f.num_x < 0 || f.num_y < 0) throw PreconditionError("formula: negative variable count");
  for (const auto& clause : f.clauses) {
    if (clause.size() > 3) throw PreconditionError("formula: clause with more than three literals");
    for (const auto& l : clause) {
      const int bound = l.universal ? f.num_x : f.num_y;
      if (l.index < 0 || l.index >= bound) throw PreconditionError("formula: variable index out of range");
    }
  }
}

CnfFormula parse_formula(std::string_view text) {
  CnfFormula f;
  bool header = false;
  int max_x = -1;
  int max_y = -1;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto toks = split_ws(strip_comment(raw, '#'));
    if (toks.empty() || toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (toks.size() != 4 || toks[1] != "qsat2" || !to_int(toks[2]) || !to_int(toks[3])) {
        throw ParseError(line_no, 1, "expected 'p qsat2 K L'");
      }
      f.num_x = static_cast<int>(*to_int(toks[2]));
      f.num_y = static_cast<int>(*to_int(toks[3]));
      header = true;
      continue;
    }
    std::vector<Literal> clause;
    bool closed = false;
    for (const auto& tok : toks) {
      if (closed) throw ParseError(line_no, 1, "literal after terminating 0");
      if (tok == "0") {
        closed = true;
        continue;
      }
      std::string_view s = tok;
      Literal lit;
      if (!s.empty() && s[0] == '-') {
        lit.negated = true;
        s.remove_prefix(1);
      }
      if (s.size() < 2 || (s[0] != 'x' && s[0] != 'y') || !to_int(s.substr(1))) {
        throw ParseError(line_no, 1, "bad literal '" + tok + "'");
      }
      lit.universal = s[0] == 'x';
      lit.index = static_cast<int>(*to_int(s.substr(1)));
      (lit.universal ? max_x : max_y) = std::max(lit.universal ? max_x : max_y, lit.index);
      clause.push_back(lit);
    }
    if (clause.size() > 3) throw ParseError(line_no, 1, "clause with more than three literals");
    f.clauses.push_back(std::move(clause));
  }
  if (!header) {
    f.num_x = max_x + 1;
    f.num_y = max_y + 1;
  } else if (max_x >= f.num_x || max_y >= f.num_y) {
    throw ParseError(line_no, 1, "variable index exceeds the header counts");
  }
  return f;
}

std::string format_formula(const CnfFormula& f) {
  std::string out = "p qsat2 " + std::to_string(f.num_x) + " " + std::to_string(f.num_y) + "\n";
  for (const auto& clause : f.clauses) {
    for (const auto& l : clause) {
      out += (l.negated ? "-" : "") + std::string(l.universal ? "x" : "y") + std::to_string(l.index) + " ";
    }
    out += "0\n";
  }
  return out;
}

int Graph::vertex_index(std::string_view name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

Graph parse_graph(std::string_view text) {
  Graph gr;
  bool declared = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = split_ws(strip_comment(raw, '#'));
    if (toks.empty()) continue;
    if (toks[0] == "vertices:") {
      if (declared) throw ParseError(line_no, 1, "duplicate vertices line");
      declared = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (gr.vertex_index(toks[i]) >= 0) throw ParseError(line_no, 1, "duplicate vertex '" + toks[i] + "'");
        gr.vertices.push_back(toks[i]);
      }
      continue;
    }
    if (toks.size() == 1 && toks[0] == "directed") {
      gr.directed = true;
      continue;
    }
    if (toks.size() != 2) throw ParseError(line_no, 1, "expected an edge 'u v'");
    int ends[2];
    for (int e = 0; e < 2; ++e) {
      int v = gr.vertex_index(toks[static_cast<std::size_t>(e)]);
      if (v < 0) {
        if (declared) throw ParseError(line_no, 1, "undeclared vertex '" + toks[static_cast<std::size_t>(e)] + "'");
        gr.vertices.push_back(toks[static_cast<std::size_t>(e)]);
        v = static_cast<int>(gr.vertices.size()) - 1;
      }
      ends[e] = v;
    }
    gr.edges.emplace_back(ends[0], ends[1]);
  }
  return gr;
}

Grammar gen_hard_grammar(int n, HardVariant variant) {
  if (n < 0) throw PreconditionError("gen_hard_grammar: level must be nonnegative");
  RuleSet rs;
  rs.rule("S0", {{"S1", 1}, {"A0", 1}});
  rs.rule("X0", {{"x", 1}});
  for (int m = 0; m < n; ++m) {
    rs.rule(idx("X", m + 1), {{idx("X", m), 2}});
    rs.rule(idx("A", m), {{idx("A", m + 1), 2}});
    rs.rule(idx("A", m), {{idx("S", m + 2), 2}, {idx("X", m), 1}, {"y", 1}});
    rs.rule(idx("S", m + 1), {{idx("A", m + 1), 1}, {idx("S", m + 2), 1}});
  }
  std::vector<std::string> nts;
  if (variant == HardVariant::cone) nts.push_back("Scone");
  for (int i = 0; i <= n; ++i) nts.push_back(idx("S", i));
  for (int i = 0; i < n; ++i) nts.push_back(idx("A", i));
  for (int i = 0; i <= n; ++i) nts.push_back(idx("X", i));
  const std::vector<std::string> temporary{idx("S", n + 1), idx("A", n)};

  switch (variant) {
    case HardVariant::full: {
      std::vector<std::string> alphabet{"x", "y"};
      alphabet.insert(alphabet.end(), temporary.begin(), temporary.end());
      return rs.build(alphabet, nts, "S0");
    }
    case HardVariant::stripped:
      return rs.build({"x", "y"}, nts, "S0", temporary);
    case HardVariant::cone: {
      RuleSet with_cone = rs;
      with_cone.rule("Scone", {{"z", 1}, {"S0", 1}, {"Scone", 1}});
      with_cone.rule("Scone", {});
      return with_cone.build({"x", "y", "z"}, nts, "Scone", temporary);
    }
  }
  throw Error("gen_hard_grammar: unknown variant");
}

QsatInclusion encode_qsat2_inclusion(const CnfFormula& f) {
  std::vector<std::string> nts;
  const RuleSet rs = qsat_core(f, nts);
  return {normalize(rs.build({"a"}, nts, "S1")), normalize(rs.build({"a"}, nts, "S2"))};
}

Grammar encode_qsat2_universality(const CnfFormula& f) {
  std::vector<std::string> nts;
  RuleSet rs = qsat_core(f, nts);
  const int k = f.num_x;
  const int m = static_cast<int>(f.clauses.size());
  for (int j = 0; j < m; ++j) {
    nts.push_back(idx("CH", j));
    nts.push_back(idx("Cany", j));
    rs.rule(idx("CH", j), {});
    rs.rule(idx("CH", j), {{idx("C", j), 2}});
    rs.rule(idx("CH", j), {{idx("C", j), 3}});
    for (int c = 0; c <= 3; ++c) {
      if (c == 0) {
        rs.rule(idx("Cany", j), {});
      } else {
        rs.rule(idx("Cany", j), {{idx("C", j), c}});
      }
    }
  }
  nts.insert(nts.end(), {"Zplus", "Zminus", "S3", "S4"});
  if (m > 0) {
    rs.rule("Zplus", {{idx("C", m - 1), 4}});
  } else if (k > 0) {
    rs.rule("Zplus", {{idx("A", k - 1), 2}});
  } else {
    rs.rule("Zplus", {{"a", 1}});
  }
  rs.rule("Zplus", {{"a", 1}, {"Zplus", 1}});
  rs.rule("Zminus", {{"a", -1}, {"Zminus", 1}});
  rs.rule("Zminus", {{"a", -1}});
  rs.rule("S3", {{"Zplus", 1}});
  rs.rule("S3", {{"Zminus", 1}});
  // Below 2^k 4^m every count is s + 2^k sum c_j 4^j with s < 2^k and
  // c_j in 0..3; the complement of S1 is "some c_j differs from 1".
  for (int j = 0; j < m; ++j) {
    std::vector<std::pair<std::string, std::int64_t>> rhs;
    for (int i = 0; i < k; ++i) rhs.emplace_back(idx("Aopt", i), 1);
    for (int jj = 0; jj < m; ++jj) rhs.emplace_back(idx(jj == j ? "CH" : "Cany", jj), 1);
    rs.rule("S3", rhs);
  }
  rs.rule("S4", {{"S2", 1}});
  rs.rule("S4", {{"S3", 1}});
  return normalize(rs.build({"a"}, nts, "S4"));
}

MembershipInstance encode_3sat_membership(const CnfFormula& f) {
  if (f.num_x != 0) throw PreconditionError("encode_3sat_membership: formula has universal variables");
  std::vector<std::string> nts;
  const RuleSet rs = qsat_core(f, nts);
  std::int64_t v = 0;
  std::int64_t power = 1;
  for (std::size_t j = 0; j < f.clauses.size(); ++j, power *= 4) v += power;
  return {normalize(rs.build({"a"}, nts, "S2")), TermVector{v}};
}

Grammar encode_3sat_unary_universality(const CnfFormula& f, const std::vector<std::int64_t>& primes) {
  validate(f);
  const auto vars = static_cast<std::size_t>(f.num_x + f.num_y);
  if (primes.size() < vars) throw PreconditionError("sat-unary: one prime per variable required");
  for (std::size_t i = 0; i < vars; ++i) {
    if (primes[i] < 2) throw PreconditionError("sat-unary: moduli must be at least 2");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::gcd(primes[i], primes[j]) != 1) throw PreconditionError("sat-unary: moduli must be coprime");
    }
  }
  auto var_of = [&](const Literal& l) { return static_cast<std::size_t>(l.universal ? l.index : f.num_x + l.index); };

  Grammar g;
  g.alphabet = {"a"};
  g.nonterminals = {"s0"};
  g.start = 0;
  std::vector<int> entry;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& clause = f.clauses[i];
    std::vector<std::size_t> distinct;
    for (const auto& l : clause) {
      if (std::find(distinct.begin(), distinct.end(), var_of(l)) == distinct.end()) distinct.push_back(var_of(l));
    }
    std::int64_t modulus = 1;
    for (auto v : distinct) modulus *= primes[v];
    const std::string prefix = "S" + std::to_string(i + 1) + "_";
    const int first = static_cast<int>(g.nonterminals.size());
    for (std::int64_t j = 0; j < modulus; ++j) g.nonterminals.push_back(prefix + std::to_string(j));
    entry.push_back(first);
    for (std::int64_t j = 0; j < modulus; ++j) {
      const int here = first + static_cast<int>(j);
      g.transitions.push_back({here, TermVector{1}, {first + static_cast<int>((j + 1) % modulus)}});
      bool sat = false;
      for (const auto& l : clause) {
        const std::int64_t want = l.negated ? 0 : 1;
        if (j % primes[var_of(l)] == want) sat = true;
      }
      if (!sat) g.transitions.push_back({here, TermVector{0}, {}});
    }
  }
  for (int e : entry) g.transitions.push_back({0, TermVector{0}, {e}});
  validate(g);
  return g;
}

MembershipInstance encode_hamiltonian_membership(const Graph& gr, std::string_view start_vertex) {
  if (gr.vertices.empty()) throw PreconditionError("hamiltonian: empty graph");
  const int s = gr.vertex_index(start_vertex);
  if (s < 0) throw PreconditionError("hamiltonian: unknown start vertex '" + std::string(start_vertex) + "'");
  Grammar g;
  g.alphabet = gr.vertices;
  for (const auto& v : gr.vertices) g.nonterminals.push_back("q_" + v);
  g.start = s;
  const std::size_t n = gr.vertices.size();
  auto arc = [&](int u, int v) {
    g.transitions.push_back({u, TermVector::unit(n, static_cast<std::size_t>(v)), {v}});
  };
  for (auto [u, v] : gr.edges) {
    arc(u, v);
    if (!gr.directed && u != v) arc(v, u);
  }
  g.transitions.push_back({s, TermVector(n), {}});
  validate(g);
  TermVector ones(n);
  for (std::size_t i = 0; i < n; ++i) ones[i] = 1;
  return {std::move(g), std::move(ones)};
}

bool qbf_holds(const CnfFormula& f) {
  validate(f);
  for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << f.num_x); ++xs) {
    bool some = false;
    for (std::uint64_t ys = 0; ys < (std::uint64_t{1} << f.num_y) && !some; ++ys) some = satisfied(f, xs, ys);
    if (!some) return false;
  }
  return true;
}

bool cnf_satisfiable(const CnfFormula& f) {
  validate(f);
  for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << f.num_x); ++xs) {
    for (std::uint64_t ys = 0; ys < (std::uint64_t{1} << f.num_y); ++ys) {
      if (satisfied(f, xs, ys)) return true;
    }
  }
  return false;
}

bool has_hamiltonian_circuit(const Graph& gr, std::string_view start_vertex) {
  const int s = gr.vertex_index(start_vertex);
  if (s < 0) throw PreconditionError("hamiltonian: unknown start vertex");
  const std::size_t n = gr.vertices.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [u, v] : gr.edges) {
    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
    if (!gr.directed) adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
  }
  std::vector<int> rest;
  for (int v = 0; v < static_cast<int>(n); ++v) {
    if (v != s) rest.push_back(v);
  }
  do {
    int prev = s;
    bool ok = true;
    for (int v : rest) {
      if (!adj[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)]) {
        ok = false;
        break;
      }
      prev = v;
    }
    if (ok && adj[static_cast<std::size_t>(prev)][static_cast<std::size_t>(s)]) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

std::vector<std::pair<std::int64_t, std::int64_t>> convex_hull_vertices(
    std::vector<std::pair<std::int64_t, std::int64_t>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 2) return points;
  using P = std::pair<std::int64_t, std::int64_t>;
  auto cross = [](const P& o, const P& a, const P& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<P> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace parikh
