#include "parikh/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "parikh/decomposition.hpp"
#include "parikh/errors.hpp"
#include "parikh/grammar.hpp"
#include "parikh/hardness.hpp"
#include "parikh/membership.hpp"
#include "parikh/runs.hpp"
#include "parikh/window.hpp"

namespace parikh {

namespace {

struct Verdict {
  std::string result;
  std::string witness = "-";
  int code = kExitTrue;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Grammar load_grammar(const std::string& path) {
  try {
    return parse_grammar(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

void emit_grammar(const Grammar& g, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << serialize_grammar(g);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << serialize_grammar(g);
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(std::string(what) + " expects two comma-separated integers, got '" + text + "'");
  }
}

// `S^2 T` over the grammar's nonterminals.
NTVector parse_nt_multiset(const std::string& text, const Grammar& g) {
  NTVector v(g.num_nonterminals(), 0);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto caret = tok.find('^');
    const std::string name = tok.substr(0, caret);
    std::int64_t k = 1;
    if (caret != std::string::npos) {
      try {
        k = std::stoll(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw Error("bad multiplicity in '" + tok + "'");
      }
    }
    const int q = g.nonterminal_index(name);
    if (q < 0) throw Error("unknown nonterminal '" + name + "'");
    if (k < 0) throw Error("negative multiplicity in '" + tok + "'");
    v[static_cast<std::size_t>(q)] += k;
  }
  return v;
}

Grammar ensure_normal_form(const Grammar& g, std::ostream& err) {
  if (classify(g).normal_form) return g;
  err << "note: grammar converted to normal form; transition ids refer to the converted grammar\n";
  return normalize(g);
}

int exit_for(Answer a) {
  switch (a) {
    case Answer::yes: return kExitTrue;
    case Answer::no: return kExitFalse;
    case Answer::bounded_no:
    case Answer::unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

int exit_for(WindowResult r) {
  switch (r) {
    case WindowResult::holds: return kExitTrue;
    case WindowResult::fails: return kExitFalse;
    case WindowResult::unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

void print_witness(const Grammar& g, const MembershipWitness& w, std::ostream& out) {
  out << "base " << format_monomial(w.base, g.alphabet) << '\n';
  out << "base-run " << format_multiset(w.base_run) << '\n';
  for (std::size_t i = 0; i < w.periods.size(); ++i) {
    out << "period " << format_monomial(w.periods[i], g.alphabet) << " times " << w.coefficients[i] << " cycle "
        << format_multiset(w.cycles[i]) << '\n';
  }
}

struct EngineFlags {
  std::string engine = "auto";
  std::optional<std::int64_t> bound;
  std::string caps;
  std::int64_t depth = 14;

  void attach(CLI::App* app) {
    app->add_option("--engine", engine, "regular-dp | general-caps | oracle | closure | auto")->capture_default_str();
    app->add_option("--bound", bound, "run-size bound for regular-dp (default B_G)");
    app->add_option("--caps", caps, "run_cap,cycle_cap for general-caps");
    app->add_option("--depth", depth, "derivation depth for the oracle engine")->capture_default_str();
  }

  EngineOptions resolve(bool all_regular) const {
    EngineOptions o;
    if (engine == "auto") {
      o.engine = all_regular ? Engine::regular_dp : Engine::general_caps;
    } else if (auto e = parse_engine(engine)) {
      o.engine = *e;
    } else {
      throw Error("unknown engine '" + engine + "'");
    }
    o.bound = bound;
    if (!caps.empty()) {
      auto [r, c] = parse_pair(caps, "--caps");
      o.caps = {r, c};
    }
    o.oracle_depth = depth;
    return o;
  }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis of commutative (Parikh-image) grammars", "parikh"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string file;
  std::string file2;
  std::string output;

  auto* parse_cmd = app.add_subcommand("parse", "parse and re-serialize a grammar file");
  parse_cmd->add_option("grammar", file, "grammar file")->required();

  auto* normalize_cmd = app.add_subcommand("normalize", "convert to normal form");
  normalize_cmd->add_option("grammar", file, "grammar file")->required();
  normalize_cmd->add_option("-o,--output", output, "write the grammar here instead of stdout");

  auto* classify_cmd = app.add_subcommand("classify", "report regular / normal-form / positive flags");
  classify_cmd->add_option("grammar", file, "grammar file")->required();

  std::string vector_text;
  std::string oracle_spec;
  EngineFlags member_flags;
  auto* member_cmd = app.add_subcommand("member", "decide whether a vector is in the Parikh image");
  member_cmd->add_option("grammar", file, "grammar file")->required();
  member_cmd->add_option("vector", vector_text, "monomial such as 'a^3 b^-2'")->required();
  member_flags.attach(member_cmd);
  member_cmd->add_option("--oracle", oracle_spec, "depth,window: answer by brute-force enumeration");

  std::int64_t depth = 10;
  std::int64_t window = 5;
  bool use_closure = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate Parikh vectors by brute force");
  oracle_cmd->add_option("grammar", file, "grammar file")->required();
  oracle_cmd->add_option("--depth", depth, "maximum derivation length")->capture_default_str();
  oracle_cmd->add_option("--window", window, "maximum infinity norm")->capture_default_str();
  oracle_cmd->add_flag("--closure", use_closure, "use the window-clipped fixpoint instead of derivations");

  std::string multiset_text;
  std::string from_text;
  std::string to_text;
  auto* order_cmd = app.add_subcommand("order", "order a subrun into a firing sequence");
  order_cmd->add_option("grammar", file, "grammar file")->required();
  order_cmd->add_option("--multiset", multiset_text, "transition multiset, e.g. 't1*2 t2*1'")->required();
  order_cmd->add_option("--from", from_text, "source multiset, e.g. 'S' (default: start symbol)");
  order_cmd->add_option("--to", to_text, "target multiset (default: empty)");

  auto* decompose_cmd = app.add_subcommand("decompose", "split a run into a base run and simple cycles");
  decompose_cmd->add_option("grammar", file, "grammar file")->required();
  decompose_cmd->add_option("--multiset", multiset_text, "run as a transition multiset")->required();
  decompose_cmd->add_option("--from", from_text, "source nonterminal (default: start symbol)");

  std::string anchor;
  std::optional<std::int64_t> cycle_cap;
  auto* cycles_cmd = app.add_subcommand("cycles", "list the simple cycles from a nonterminal");
  cycles_cmd->add_option("grammar", file, "grammar file")->required();
  cycles_cmd->add_option("--at", anchor, "anchor nonterminal (default: start symbol)");
  cycles_cmd->add_option("--cap", cycle_cap, "maximum cycle size (default: gamma(N) - 1)");

  std::int64_t run_cap = 12;
  bool dim2 = false;
  auto* bundles_cmd = app.add_subcommand("bundles", "simple-bundle representation of the Parikh image");
  bundles_cmd->add_option("grammar", file, "grammar file")->required();
  bundles_cmd->add_option("--run-cap", run_cap, "maximum base run size")->capture_default_str();
  bundles_cmd->add_flag("--dim2", dim2, "two-letter construction from extreme cycles");

  std::string mode = "include";
  std::int64_t sweep_window = 5;
  EngineFlags compare_flags;
  auto* compare_cmd = app.add_subcommand("compare", "inclusion / equivalence / disjointness within a window");
  compare_cmd->add_option("grammar1", file, "first grammar file")->required();
  compare_cmd->add_option("grammar2", file2, "second grammar file")->required();
  compare_cmd->add_option("--mode", mode, "include | equiv | disjoint")->capture_default_str();
  compare_cmd->add_option("--window", sweep_window, "box half-width B")->capture_default_str();
  compare_flags.attach(compare_cmd);

  std::string ambient = "nat";
  EngineFlags universal_flags;
  auto* universal_cmd = app.add_subcommand("universal", "universality within a window");
  universal_cmd->add_option("grammar", file, "grammar file")->required();
  universal_cmd->add_option("--window", sweep_window, "box half-width B")->capture_default_str();
  universal_cmd->add_option("--ambient", ambient, "nat | int")->capture_default_str();
  universal_flags.attach(universal_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "generate hard instances and reductions");
  gen_cmd->require_subcommand(1);
  int level = 0;
  std::string variant = "full";
  auto* gen_hard = gen_cmd->add_subcommand("hard", "the hard grammar family");
  gen_hard->add_option("--n", level, "level n")->required();
  gen_hard->add_option("--variant", variant, "full | stripped | cone")->capture_default_str();
  gen_hard->add_option("-o,--output", output, "write the grammar here instead of stdout");

  std::string formula_file;
  std::string part = "lhs";
  auto* gen_qsat = gen_cmd->add_subcommand("qsat2", "QSAT2 inclusion / universality / 3SAT membership");
  gen_qsat->add_option("--formula", formula_file, "formula file")->required();
  gen_qsat->add_option("--part", part, "lhs | rhs | universal | sat")->capture_default_str();
  gen_qsat->add_option("-o,--output", output, "write the grammar here instead of stdout");

  std::string primes_text = "2,3,5";
  auto* gen_unary = gen_cmd->add_subcommand("sat-unary", "unary universality reduction from 3SAT");
  gen_unary->add_option("--formula", formula_file, "formula file")->required();
  gen_unary->add_option("--primes", primes_text, "comma-separated moduli, one per variable")->capture_default_str();
  gen_unary->add_option("-o,--output", output, "write the grammar here instead of stdout");

  std::string graph_file;
  std::string start_vertex;
  auto* gen_ham = gen_cmd->add_subcommand("ham", "Hamiltonian-circuit membership reduction");
  gen_ham->add_option("--graph", graph_file, "graph file")->required();
  gen_ham->add_option("--start", start_vertex, "start vertex")->required();
  gen_ham->add_option("-o,--output", output, "write the grammar here instead of stdout");

  auto* report_cmd = app.add_subcommand("bound-report", "computable ingredients of the window bound");
  report_cmd->add_option("grammar1", file, "first grammar file")->required();
  report_cmd->add_option("grammar2", file2, "second grammar file")->required();

  auto finish = [&](const Verdict& v) {
    out << "VERDICT " << v.result << " WITNESS " << v.witness << '\n';
    return v.code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return finish({"ok"});
    }
    err << "usage error: " << e.what() << '\n';
    return finish({"usage-error", "-", kExitUsage});
  }

  try {
    if (parse_cmd->parsed()) {
      out << serialize_grammar(load_grammar(file));
      return finish({"ok"});
    }
    if (normalize_cmd->parsed()) {
      emit_grammar(normalize(load_grammar(file)), output, out);
      return finish({"ok"});
    }
    if (classify_cmd->parsed()) {
      const auto c = classify(load_grammar(file));
      out << "regular: " << (c.regular ? "true" : "false") << '\n'
          << "normal-form: " << (c.normal_form ? "true" : "false") << '\n'
          << "positive: " << (c.positive ? "true" : "false") << '\n';
      return finish({"ok"});
    }
    if (member_cmd->parsed()) {
      Grammar g = load_grammar(file);
      const TermVector v = parse_monomial(vector_text, g.alphabet);
      if (!oracle_spec.empty()) {
        auto [d, w] = parse_pair(oracle_spec, "--oracle");
        const bool found = oracle_language(g, d, w).contains(v);
        return finish({found ? "true" : "false", found ? format_monomial(v, g.alphabet) : "-",
                       found ? kExitTrue : kExitFalse});
      }
      const auto opts = member_flags.resolve(classify(g).regular);
      MembershipResult r;
      switch (opts.engine) {
        case Engine::regular_dp:
          r = RegularMembership(g, opts.bound).query(v);
          break;
        case Engine::general_caps:
          g = ensure_normal_form(g, err);
          r = GeneralMembership(g, opts.caps).query(v);
          break;
        case Engine::oracle:
        case Engine::closure: {
          WindowMembership m(g, v.norm_inf(), opts);
          r.answer = m.query(v);
          break;
        }
      }
      if (r.witness) print_witness(g, *r.witness, out);
      return finish({std::string(to_string(r.answer)),
                     r.answer == Answer::yes ? format_monomial(v, g.alphabet) : "-", exit_for(r.answer)});
    }
    if (oracle_cmd->parsed()) {
      const Grammar g = load_grammar(file);
      std::set<TermVector> vs;
      if (use_closure) {
        auto c = oracle_window_closure(g, window);
        out << "# exact: " << (c.exact ? "true" : "false") << '\n';
        vs = std::move(c.vectors);
      } else {
        vs = oracle_language(g, depth, window);
      }
      for (const auto& v : vs) out << format_monomial(v, g.alphabet) << '\n';
      return finish({"ok"});
    }
    if (order_cmd->parsed()) {
      const Grammar g = load_grammar(file);
      SubrunCert cert{parse_multiset(multiset_text, g),
                      from_text.empty() ? nt_unit(g, g.start) : parse_nt_multiset(from_text, g),
                      parse_nt_multiset(to_text, g)};
      const auto check = is_subrun(g, cert.multiset, cert.from, cert.to);
      if (!check) {
        err << "not a subrun: " << to_string(check.reason) << '\n';
        return finish({"false", "-", kExitFalse});
      }
      out << "order";
      for (auto id : order_subrun(g, cert)) out << ' ' << transition_label(id);
      out << '\n';
      return finish({"true"});
    }
    if (decompose_cmd->parsed()) {
      const Grammar g = load_grammar(file);
      const int p = from_text.empty() ? g.start : g.nonterminal_index(from_text);
      if (p < 0) throw Error("unknown nonterminal '" + from_text + "'");
      const auto d = decompose_run(g, parse_multiset(multiset_text, g), p);
      const auto base = run_stats(g, d.base_run).parikh;
      out << "base-run " << format_multiset(d.base_run) << '\n';
      out << "base " << format_monomial(base, g.alphabet) << '\n';
      for (const auto& c : d.cycles) {
        out << "cycle " << format_multiset(c.cycle) << " anchor " << g.nonterminals[static_cast<std::size_t>(c.anchor)]
            << " times " << c.multiplicity << " psi " << format_monomial(run_stats(g, c.cycle).parikh, g.alphabet)
            << '\n';
      }
      return finish({"true", format_monomial(base, g.alphabet)});
    }
    if (cycles_cmd->parsed()) {
      const Grammar g = load_grammar(file);
      const int q = anchor.empty() ? g.start : g.nonterminal_index(anchor);
      if (q < 0) throw Error("unknown nonterminal '" + anchor + "'");
      const auto full = gamma_limit(g.num_nonterminals(), classify(g).regular, 1'000'000) - 1;
      const auto e = enumerate_simple_cycles(g, q, cycle_cap.value_or(full));
      for (const auto& c : e.cycles) {
        out << format_multiset(c) << " psi " << format_monomial(run_stats(g, c).parikh, g.alphabet) << '\n';
      }
      if (e.truncated) err << "warning: cap below gamma(N) - 1; list may be incomplete\n";
      return finish({e.truncated ? "unknown" : "true", "-", e.truncated ? kExitUnknown : kExitTrue});
    }
    if (bundles_cmd->parsed()) {
      const Grammar g = load_grammar(file);
      const auto set = dim2 ? dim2_bundles(g, run_cap) : regular_bundles(g, run_cap);
      for (std::size_t i = 0; i < set.bundles.size(); ++i) {
        out << "bundle " << i + 1 << '\n';
        for (const auto& w : set.bundles[i].bases) out << "W: " << format_monomial(w, g.alphabet) << '\n';
        for (const auto& p : set.bundles[i].periods) out << "P: " << format_monomial(p, g.alphabet) << '\n';
      }
      if (set.truncated) err << "warning: run cap below B_G; bundles may miss vectors\n";
      return finish({set.truncated ? "unknown" : "true", "-", set.truncated ? kExitUnknown : kExitTrue});
    }
    if (compare_cmd->parsed()) {
      Grammar g1 = load_grammar(file);
      Grammar g2 = load_grammar(file2);
      CompareMode m;
      if (mode == "include") {
        m = CompareMode::inclusion;
      } else if (mode == "equiv") {
        m = CompareMode::equivalence;
      } else if (mode == "disjoint") {
        m = CompareMode::disjointness;
      } else {
        err << "usage error: --mode must be include, equiv or disjoint\n";
        return finish({"usage-error", "-", kExitUsage});
      }
      const auto opts = compare_flags.resolve(classify(g1).regular && classify(g2).regular);
      if (opts.engine == Engine::general_caps) {
        g1 = ensure_normal_form(g1, err);
        g2 = ensure_normal_form(g2, err);
      }
      const auto v = compare_within_window(g1, g2, sweep_window, m, opts);
      out << "window " << v.window << '\n';
      return finish({std::string(to_string(v.result)), v.witness ? format_monomial(*v.witness, g1.alphabet) : "-",
                     exit_for(v.result)});
    }
    if (universal_cmd->parsed()) {
      Grammar g = load_grammar(file);
      Ambient amb;
      if (ambient == "nat") {
        amb = Ambient::naturals;
      } else if (ambient == "int") {
        amb = Ambient::integers;
      } else {
        err << "usage error: --ambient must be nat or int\n";
        return finish({"usage-error", "-", kExitUsage});
      }
      const auto opts = universal_flags.resolve(classify(g).regular);
      if (opts.engine == Engine::general_caps) g = ensure_normal_form(g, err);
      const auto v = universality_within_window(g, sweep_window, amb, opts);
      out << "window " << v.window << '\n';
      return finish({std::string(to_string(v.result)), v.witness ? format_monomial(*v.witness, g.alphabet) : "-",
                     exit_for(v.result)});
    }
    if (gen_hard->parsed()) {
      HardVariant hv;
      if (variant == "full") {
        hv = HardVariant::full;
      } else if (variant == "stripped") {
        hv = HardVariant::stripped;
      } else if (variant == "cone") {
        hv = HardVariant::cone;
      } else {
        err << "usage error: --variant must be full, stripped or cone\n";
        return finish({"usage-error", "-", kExitUsage});
      }
      emit_grammar(gen_hard_grammar(level, hv), output, out);
      return finish({"ok"});
    }
    if (gen_qsat->parsed()) {
      const auto f = parse_formula(read_file(formula_file));
      if (part == "lhs" || part == "rhs") {
        auto inc = encode_qsat2_inclusion(f);
        emit_grammar(part == "lhs" ? inc.g1 : inc.g2, output, out);
        return finish({"ok"});
      }
      if (part == "universal") {
        emit_grammar(encode_qsat2_universality(f), output, out);
        return finish({"ok"});
      }
      if (part == "sat") {
        auto inst = encode_3sat_membership(f);
        emit_grammar(inst.grammar, output, out);
        const auto mono = format_monomial(inst.vector, inst.grammar.alphabet);
        out << "# vector: " << mono << '\n';
        return finish({"ok", mono});
      }
      err << "usage error: --part must be lhs, rhs, universal or sat\n";
      return finish({"usage-error", "-", kExitUsage});
    }
    if (gen_unary->parsed()) {
      std::vector<std::int64_t> primes;
      std::istringstream in(primes_text);
      std::string tok;
      while (std::getline(in, tok, ',')) {
        try {
          primes.push_back(std::stoll(tok));
        } catch (const std::exception&) {
          err << "usage error: bad prime '" << tok << "'\n";
          return finish({"usage-error", "-", kExitUsage});
        }
      }
      emit_grammar(encode_3sat_unary_universality(parse_formula(read_file(formula_file)), primes), output, out);
      return finish({"ok"});
    }
    if (gen_ham->parsed()) {
      auto inst = encode_hamiltonian_membership(parse_graph(read_file(graph_file)), start_vertex);
      emit_grammar(inst.grammar, output, out);
      const auto mono = format_monomial(inst.vector, inst.grammar.alphabet);
      out << "# vector: " << mono << '\n';
      return finish({"ok", mono});
    }
    if (report_cmd->parsed()) {
      const auto r = window_bound_report(load_grammar(file), load_grammar(file2));
      const BGBound* bs[] = {&r.bg1, &r.bg2};
      for (int i = 0; i < 2; ++i) {
        const auto& b = *bs[i];
        out << "grammar" << i + 1 << ": N=" << b.N << " A=" << b.A << " regular=" << (b.regular ? "true" : "false")
            << " B_G=" << b.value << " gamma_cycle=" << b.gamma_cycle << " gamma_skeleton=" << b.gamma_skeleton
            << " H=" << b.hadamard << '\n';
      }
      out << "note: " << r.note << '\n';
      return finish({"ok"});
    }
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return finish({"unknown", "-", kExitUnknown});
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return finish({"input-error", "-", kExitInput});
  }
  err << "usage error: no command\n";
  return finish({"usage-error", "-", kExitUsage});
}

}  // namespace parikh
