#include "parikh/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "parikh/errors.hpp"

namespace parikh {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

// Whitespace split that remembers where each token started.
std::vector<Token> tokenize(std::string_view s, std::size_t base_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({s.substr(i, j - i), base_column + i});
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

// `name` or `name^k`.
std::pair<std::string_view, std::int64_t> split_power(const Token& tok, std::size_t line) {
  auto caret = tok.text.find('^');
  if (caret == std::string_view::npos) return {tok.text, 1};
  auto name = tok.text.substr(0, caret);
  auto exp = parse_int(tok.text.substr(caret + 1));
  if (!exp) throw ParseError(line, tok.column + caret + 1, "bad exponent in '" + std::string(tok.text) + "'");
  return {name, *exp};
}

TermVector parse_monomial_tokens(const std::vector<Token>& toks, const std::vector<std::string>& alphabet,
                                 std::size_t line) {
  TermVector v(alphabet.size());
  for (const auto& tok : toks) {
    if (tok.text == "0" && toks.size() == 1) break;
    auto [name, exp] = split_power(tok, line);
    if (!is_identifier(name)) {
      throw ParseError(line, tok.column, "expected terminal name, got '" + std::string(tok.text) + "'");
    }
    auto it = std::find(alphabet.begin(), alphabet.end(), name);
    if (it == alphabet.end()) {
      throw ParseError(line, tok.column, "undeclared terminal '" + std::string(name) + "'");
    }
    v[static_cast<std::size_t>(it - alphabet.begin())] += exp;
  }
  return v;
}

std::string format_targets(const std::vector<int>& targets, const std::vector<std::string>& names) {
  std::string out;
  std::size_t i = 0;
  while (i < targets.size()) {
    std::size_t j = i;
    while (j < targets.size() && targets[j] == targets[i]) ++j;
    if (!out.empty()) out += ' ';
    out += names[static_cast<std::size_t>(targets[i])];
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace

int Grammar::terminal_index(std::string_view name) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), name);
  return it == alphabet.end() ? -1 : static_cast<int>(it - alphabet.begin());
}

int Grammar::nonterminal_index(std::string_view name) const {
  auto it = std::find(nonterminals.begin(), nonterminals.end(), name);
  return it == nonterminals.end() ? -1 : static_cast<int>(it - nonterminals.begin());
}

int Grammar::intern_nonterminal(const std::string& name) {
  int idx = nonterminal_index(name);
  if (idx >= 0) return idx;
  nonterminals.push_back(name);
  return static_cast<int>(nonterminals.size()) - 1;
}

std::string transition_label(std::size_t id) { return "t" + std::to_string(id + 1); }

void validate(const Grammar& g) {
  std::set<std::string> seen;
  for (const auto& a : g.alphabet) {
    if (!is_identifier(a)) throw PreconditionError("bad terminal name '" + a + "'");
    if (!seen.insert(a).second) throw PreconditionError("duplicate symbol '" + a + "'");
  }
  for (const auto& q : g.nonterminals) {
    if (!is_identifier(q)) throw PreconditionError("bad nonterminal name '" + q + "'");
    if (!seen.insert(q).second) throw PreconditionError("symbol '" + q + "' declared twice or clashes");
  }
  const int n = static_cast<int>(g.nonterminals.size());
  if (g.start < 0 || g.start >= n) throw PreconditionError("start symbol out of range");
  for (const auto& t : g.transitions) {
    if (t.source < 0 || t.source >= n) throw PreconditionError("transition source out of range");
    if (t.output.dim() != g.alphabet.size()) throw PreconditionError("transition output has wrong dimension");
    if (!std::is_sorted(t.targets.begin(), t.targets.end())) throw PreconditionError("unsorted targets");
    for (int q : t.targets) {
      if (q < 0 || q >= n) throw PreconditionError("transition target out of range");
    }
  }
}

TermVector parse_monomial(std::string_view text, const std::vector<std::string>& alphabet) {
  return parse_monomial_tokens(tokenize(text, 1), alphabet, 1);
}

std::string format_monomial(const TermVector& v, const std::vector<std::string>& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += alphabet[i];
    if (v[i] != 1) out += "^" + std::to_string(v[i]);
  }
  return out.empty() ? "0" : out;
}

Grammar parse_grammar(std::string_view text) {
  struct RawRule {
    std::size_t line;
    std::string_view body;
  };
  Grammar g;
  std::optional<std::pair<std::string, std::size_t>> start;
  std::optional<std::vector<Token>> declared_nts;
  std::size_t declared_nts_line = 0;
  std::vector<RawRule> rules;
  bool have_alphabet = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto hash = raw.find('#');
    auto line = raw.substr(0, hash);
    if (trim(line).empty()) continue;
    // CLI output appends a verdict trailer after grammar text.
    if (trim(line).rfind("VERDICT", 0) == 0) continue;

    auto header = [&](std::string_view key) -> std::optional<std::vector<Token>> {
      auto t = trim(line);
      if (t.rfind(key, 0) != 0) return std::nullopt;
      auto offset = static_cast<std::size_t>(line.find(key)) + key.size();
      return tokenize(line.substr(offset), offset + 1);
    };
    if (auto toks = header("alphabet:")) {
      if (have_alphabet) throw ParseError(line_no, 1, "duplicate alphabet line");
      have_alphabet = true;
      for (const auto& tok : *toks) {
        if (!is_identifier(tok.text)) throw ParseError(line_no, tok.column, "bad terminal name '" + std::string(tok.text) + "'");
        if (g.terminal_index(tok.text) >= 0) throw ParseError(line_no, tok.column, "duplicate terminal '" + std::string(tok.text) + "'");
        g.alphabet.emplace_back(tok.text);
      }
    } else if (auto toks = header("start:")) {
      if (start) throw ParseError(line_no, 1, "duplicate start line");
      if (toks->size() != 1) throw ParseError(line_no, 1, "start line needs exactly one symbol");
      if (!is_identifier((*toks)[0].text)) throw ParseError(line_no, (*toks)[0].column, "bad start symbol");
      start = std::make_pair(std::string((*toks)[0].text), line_no);
    } else if (auto toks = header("nonterminals:")) {
      if (declared_nts) throw ParseError(line_no, 1, "duplicate nonterminals line");
      declared_nts = *toks;
      declared_nts_line = line_no;
    } else {
      rules.push_back({line_no, line});
    }
  }

  if (!start) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing start line");

  auto check_clash = [&](std::string_view name, std::size_t line, std::size_t col) {
    if (g.terminal_index(name) >= 0) {
      throw ParseError(line, col, "'" + std::string(name) + "' is both a terminal and a nonterminal");
    }
  };

  if (declared_nts) {
    for (const auto& tok : *declared_nts) {
      if (!is_identifier(tok.text)) throw ParseError(declared_nts_line, tok.column, "bad nonterminal name");
      check_clash(tok.text, declared_nts_line, tok.column);
      if (g.nonterminal_index(tok.text) >= 0) throw ParseError(declared_nts_line, tok.column, "duplicate nonterminal");
      g.nonterminals.emplace_back(tok.text);
    }
    if (g.nonterminal_index(start->first) < 0) throw ParseError(start->second, 1, "undeclared start symbol '" + start->first + "'");
  } else {
    check_clash(start->first, start->second, 1);
    g.nonterminals.push_back(start->first);
  }
  g.start = g.nonterminal_index(start->first);

  auto resolve_nt = [&](std::string_view name, std::size_t line, std::size_t col) {
    if (!is_identifier(name)) throw ParseError(line, col, "bad nonterminal name '" + std::string(name) + "'");
    check_clash(name, line, col);
    int idx = g.nonterminal_index(name);
    if (idx >= 0) return idx;
    if (declared_nts) throw ParseError(line, col, "undeclared nonterminal '" + std::string(name) + "'");
    return g.intern_nonterminal(std::string(name));
  };

  for (const auto& rule : rules) {
    auto arrow = rule.body.find("->");
    if (arrow == std::string_view::npos) throw ParseError(rule.line, 1, "expected 'SRC -> MONOMIAL : TARGETS'");
    auto colon = rule.body.find(':', arrow + 2);
    if (colon == std::string_view::npos) throw ParseError(rule.line, arrow + 3, "missing ':' after monomial");
    auto src_toks = tokenize(rule.body.substr(0, arrow), 1);
    if (src_toks.size() != 1) throw ParseError(rule.line, 1, "expected exactly one source nonterminal");
    Transition t;
    t.source = resolve_nt(src_toks[0].text, rule.line, src_toks[0].column);
    auto mono = tokenize(rule.body.substr(arrow + 2, colon - arrow - 2), arrow + 3);
    t.output = parse_monomial_tokens(mono, g.alphabet, rule.line);
    for (const auto& tok : tokenize(rule.body.substr(colon + 1), colon + 2)) {
      auto [name, k] = split_power(tok, rule.line);
      if (k < 1) throw ParseError(rule.line, tok.column, "target multiplicity must be >= 1");
      int q = resolve_nt(name, rule.line, tok.column);
      t.targets.insert(t.targets.end(), static_cast<std::size_t>(k), q);
    }
    std::sort(t.targets.begin(), t.targets.end());
    g.transitions.push_back(std::move(t));
  }
  // Rule vectors were sized against the full alphabet; nothing else to fix up.
  validate(g);
  return g;
}

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& a : g.alphabet) out << ' ' << a;
  out << "\nnonterminals:";
  for (const auto& q : g.nonterminals) out << ' ' << q;
  out << "\nstart: " << g.nonterminals[static_cast<std::size_t>(g.start)] << '\n';
  for (const auto& t : g.transitions) {
    out << g.nonterminals[static_cast<std::size_t>(t.source)] << " ->";
    if (!t.output.is_zero()) out << ' ' << format_monomial(t.output, g.alphabet);
    out << " :";
    if (!t.targets.empty()) out << ' ' << format_targets(t.targets, g.nonterminals);
    out << '\n';
  }
  return out.str();
}

Classification classify(const Grammar& g) {
  Classification c{true, true, true};
  for (const auto& t : g.transitions) {
    const bool small_output = t.output.norm1() <= 1;
    c.normal_form = c.normal_form && small_output && t.targets.size() <= 2;
    c.regular = c.regular && small_output && t.targets.size() <= 1;
    c.positive = c.positive && t.output.is_nonnegative();
  }
  return c;
}

std::string fresh_name(const std::string& base, const Grammar& g) {
  for (std::size_t k = 1;; ++k) {
    std::string name = base + "__" + std::to_string(k);
    if (g.nonterminal_index(name) < 0 && g.terminal_index(name) < 0) return name;
  }
}

Grammar normalize(const Grammar& g) {
  Grammar out = g;
  const std::size_t dim = g.alphabet.size();
  std::vector<Transition> appended;
  for (std::size_t id = 0; id < g.transitions.size(); ++id) {
    const Transition& t = g.transitions[id];
    if (t.output.norm1() <= 1 && t.targets.size() <= 2) continue;

    std::vector<TermVector> units;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::int64_t c = t.output[i];
      for (std::int64_t k = 0; k < std::llabs(c); ++k) units.push_back(TermVector::unit(dim, i, c > 0 ? 1 : -1));
    }
    const std::size_t m = units.size();
    const std::size_t r = t.targets.size();
    // Chain of k rules: rule i < k carries chain link c_i plus (for the first
    // r-2 rules) one original target; the last rule carries the rest (<= 2).
    const std::size_t k = std::max<std::size_t>({m, r >= 1 ? r - 1 : 0, 1});
    const std::size_t spread = r > 2 ? r - 2 : 0;
    int current = t.source;
    std::size_t next_target = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Transition piece;
      piece.source = current;
      piece.output = i < m ? units[i] : TermVector(dim);
      if (i + 1 < k) {
        if (i < spread) piece.targets.push_back(t.targets[next_target++]);
        current = out.intern_nonterminal(fresh_name(g.nonterminals[static_cast<std::size_t>(t.source)], out));
        piece.targets.push_back(current);
      } else {
        while (next_target < r) piece.targets.push_back(t.targets[next_target++]);
      }
      std::sort(piece.targets.begin(), piece.targets.end());
      if (i == 0) {
        out.transitions[id] = std::move(piece);
      } else {
        appended.push_back(std::move(piece));
      }
    }
  }
  out.transitions.insert(out.transitions.end(), appended.begin(), appended.end());
  return out;
}

Grammar negate_grammar(const Grammar& g) {
  Grammar out = g;
  for (auto& t : out.transitions) t.output = -t.output;
  return out;
}

Grammar difference_grammar(const Grammar& g1, const Grammar& g2) {
  if (!classify(g1).regular || !classify(g2).regular) {
    throw PreconditionError("difference_grammar requires regular grammars");
  }
  Grammar out;
  out.alphabet = g1.alphabet;
  for (const auto& a : g2.alphabet) {
    if (out.terminal_index(a) < 0) out.alphabet.push_back(a);
  }
  for (const auto& q : g1.nonterminals) {
    if (out.terminal_index(q) >= 0) throw PreconditionError("nonterminal '" + q + "' clashes with merged alphabet");
  }
  out.nonterminals = g1.nonterminals;
  out.start = g1.start;

  std::vector<int> rename(g2.nonterminals.size());
  for (std::size_t i = 0; i < g2.nonterminals.size(); ++i) {
    const auto& name = g2.nonterminals[i];
    const bool taken = out.nonterminal_index(name) >= 0 || out.terminal_index(name) >= 0;
    rename[i] = out.intern_nonterminal(taken ? fresh_name(name, out) : name);
  }
  const int start2 = rename[static_cast<std::size_t>(g2.start)];

  auto widen = [&](const TermVector& v, const std::vector<std::string>& alpha) {
    TermVector w(out.alphabet.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) w[static_cast<std::size_t>(out.terminal_index(alpha[i]))] = v[i];
    return w;
  };

  for (const auto& t : g1.transitions) {
    Transition u = t;
    u.output = widen(t.output, g1.alphabet);
    if (u.targets.empty()) u.targets = {start2};
    out.transitions.push_back(std::move(u));
  }
  for (const auto& t : negate_grammar(g2).transitions) {
    Transition u;
    u.source = rename[static_cast<std::size_t>(t.source)];
    u.output = widen(t.output, g2.alphabet);
    for (int q : t.targets) u.targets.push_back(rename[static_cast<std::size_t>(q)]);
    std::sort(u.targets.begin(), u.targets.end());
    out.transitions.push_back(std::move(u));
  }
  return out;
}

}  // namespace parikh
