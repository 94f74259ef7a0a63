#include "ucfg/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ucfg/counting.hpp"
#include "ucfg/error.hpp"
#include "ucfg/measure.hpp"
#include "ucfg/oracle.hpp"
#include "ucfg/reductions.hpp"
#include "ucfg/sqrtsum.hpp"

namespace ucfg::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kModule = "cli";

Json rational_json(const Rational& r) { return Json{{"exact", to_string(r)}, {"decimal", to_decimal(r, 40)}}; }

Json enclosure_json(const Enclosure& e) {
  return Json{{"lo", rational_json(e.lo)}, {"hi", rational_json(e.hi)}, {"width", rational_json(e.tail)},
              {"terms_used", e.terms_used}};
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, kModule, "cannot write " + path);
  f << text;
  if (!f) throw Error(Errc::Io, kModule, "write failed for " + path);
}

// Shared state of one invocation.
struct Session {
  Json inputs = Json::array();
  Json result = Json::object();
  Json bounds = Json::object();
  int exit = kExitDefinitive;

  std::string read(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, kModule, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    inputs.push_back(Json{{"path", path}, {"fnv1a", fnv1a(text)}, {"bytes", text.size()}});
    return text;
  }

  ShortGnfGrammar grammar(const std::string& path) { return binarize_prefixed(parse_grammar(read(path))); }
  FiniteAutomaton automaton(const std::string& path) { return parse_automaton(read(path)); }
  RegexFile regex(const std::string& path) { return parse_regex_file(read(path)); }
};

Json words_json(const Alphabet& a, const Word& w) { return a.render(w); }

// parse -------------------------------------------------------------------

struct ParseOpts {
  std::string grammar;
  std::optional<int> lint;
};

void cmd_parse(Session& s, const ParseOpts& o) {
  Grammar g = parse_grammar(s.read(o.grammar));
  ShortGnfGrammar sg = binarize_prefixed(g);
  bool was_short = true;
  try {
    validate_short_gnf(g);
  } catch (const Error&) {
    was_short = false;
  }
  s.result["alphabet"] = g.alphabet().letters();
  s.result["nonterminals"] = g.nonterminal_count();
  s.result["productions"] = g.productions().size();
  s.result["short_gnf"] = was_short;
  s.result["short_gnf_nonterminals"] = sg.nonterminal_count();
  if (o.lint) {
    AmbiguityVerdict v = check_unambiguous_up_to(sg, *o.lint);
    s.result["lint"] = Json{{"ambiguous", v.ambiguous}, {"bound", v.bound},
                            {"witness", v.witness ? Json(sg.alphabet().render(*v.witness)) : Json(nullptr)}};
    s.bounds["lint_length"] = *o.lint;
    s.exit = v.ambiguous ? kExitDefinitive : kExitBounded;
  }
}

// count -------------------------------------------------------------------

struct CountOpts {
  std::string grammar;
  int upto = 10;
};

void cmd_count(Session& s, const CountOpts& o) {
  ShortGnfGrammar g = s.grammar(o.grammar);
  PrefixTable t = eval_prefix(ucfg_counting_system(g), o.upto);
  Json counts = Json::array();
  for (const auto& v : t.values[0]) counts.push_back(v.get_den() == 1 ? to_string(v.get_num()) : to_string(v));
  s.result["counts"] = counts;
  s.result["note"] = "derivation trees per length; equal to word counts for unambiguous grammars";
  s.bounds["upto"] = o.upto;
}

// universal ---------------------------------------------------------------

struct UniversalOpts {
  std::string grammar;
  int bound = kDefaultUniversalityBound;
  std::string emit_reals;
};

Json verdict_json(const UniversalityVerdict& v, const Alphabet& a) {
  Json j{{"verdict", kind_name(v.kind)}};
  j["witness_length"] = v.witness_length ? Json(*v.witness_length) : Json(nullptr);
  j["witness"] = v.witness ? Json(a.render(*v.witness)) : Json(nullptr);
  j["bound"] = v.bound ? Json(*v.bound) : Json(nullptr);
  return j;
}

void cmd_universal(Session& s, const UniversalOpts& o) {
  ShortGnfGrammar g = s.grammar(o.grammar);
  UniversalityVerdict v = ucfg_universal(g, o.bound);
  s.result = verdict_json(v, g.alphabet());
  s.bounds["bound"] = o.bound;
  if (!o.emit_reals.empty()) {
    write_file(o.emit_reals, emit_reals_sentence(universality_difference_system(g)));
    s.result["reals_sentence"] = o.emit_reals;
  }
  s.exit = v.kind == UniversalityVerdict::Kind::UniversalUpTo ? kExitBounded : kExitDefinitive;
}

void cmd_universal_ufa(Session& s, const std::string& path) {
  FiniteAutomaton m = s.automaton(path);
  UniversalityVerdict v = ufa_universal(m);
  s.result = verdict_json(v, m.alphabet());
}

// include -----------------------------------------------------------------

struct IncludeOpts {
  std::string lhs, rhs;
  int bound = kDefaultUniversalityBound;
  std::string dump_dir, emit_reals;
};

void cmd_include(Session& s, const IncludeOpts& o) {
  FiniteAutomaton a = s.automaton(o.lhs);
  bool grammar_rhs = extension(o.rhs) == ".gnf";
  InclusionResult r;
  if (grammar_rhs) {
    r = include_nfa_ucfg(a, s.grammar(o.rhs), o.bound);
    s.bounds["bound"] = o.bound;
  } else {
    r = include_nfa_ufa(a, s.automaton(o.rhs));
  }
  s.result["verdict"] = kind_name(r.kind);
  s.result["witness_length"] = r.witness_length ? Json(*r.witness_length) : Json(nullptr);
  s.result["witness"] = r.witness ? Json(a.alphabet().render(*r.witness)) : Json(nullptr);
  s.result["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);

  if (!o.dump_dir.empty()) {
    fs::create_directories(o.dump_dir);
    Json files = Json::array();
    auto dump = [&](const std::string& name, const std::string& text) {
      std::string path = (fs::path(o.dump_dir) / name).string();
      write_file(path, text);
      files.push_back(path);
    };
    if (r.lhs_lifted) dump("lhs_lifted.aut", serialize(*r.lhs_lifted));
    if (r.rhs_lifted) dump("rhs_lifted.aut", serialize(*r.rhs_lifted));
    if (r.rhs_lifted_grammar) dump("rhs_lifted.gnf", serialize(r.rhs_lifted_grammar->grammar()));
    if (r.union_automaton) dump("union.aut", serialize(*r.union_automaton));
    if (r.product_grammar) dump("product.gnf", serialize(r.product_grammar->grammar()));
    if (r.union_grammar) dump("union.gnf", serialize(r.union_grammar->grammar()));
    if (r.complement) dump("complement.aut", serialize(*r.complement));
    s.result["artifacts"] = files;
  }
  if (!o.emit_reals.empty()) {
    if (!grammar_rhs)
      throw Error(Errc::Usage, kModule, "--emit-reals needs a grammar on the right-hand side");
    write_file(o.emit_reals, emit_reals_sentence(inclusion_difference_system(r)));
    s.result["reals_sentence"] = o.emit_reals;
  }
  s.exit = r.kind == InclusionResult::Kind::IncludedUpTo ? kExitBounded : kExitDefinitive;
}

// measure -----------------------------------------------------------------

struct MeasureOpts {
  std::string input;
  std::string width = "1/1099511627776";  // 2^-40
  std::string cmp, threshold;
};

void cmd_measure(Session& s, const MeasureOpts& o) {
  if (o.cmp.empty() != o.threshold.empty())
    throw Error(Errc::Usage, kModule, "--cmp and --threshold go together");
  std::optional<Cmp> cmp;
  std::optional<Rational> eps;
  if (!o.cmp.empty()) {
    cmp = parse_cmp(o.cmp);
    eps = parse_rational(o.threshold);
    s.result["cmp"] = cmp_name(*cmp);
    s.result["threshold"] = rational_json(*eps);
  }

  std::string ext = extension(o.input);
  std::optional<Rational> exact;
  std::optional<Enclosure> enclosure;
  if (ext == ".aut") {
    AutomatonMeasure m = measure_automaton_exact(s.automaton(o.input));
    if (m.exact) exact = *m.value;
    else enclosure = m.enclosure;
  } else if (ext == ".rx") {
    RegexFile f = s.regex(o.input);
    exact = measure_regex_compositional(f.regex, f.alphabet.size());
  } else if (ext == ".gnf") {
    ShortGnfGrammar g = s.grammar(o.input);
    if (cmp) {
      CompareResult c = compare_measure(g, *cmp, *eps);
      s.result["exact"] = false;
      s.result["enclosure"] = enclosure_json(c.enclosure);
      s.result["verdict"] = kind_name(c.kind);
      s.bounds["floor"] = rational_json(pow2_neg(256));
      s.exit = c.kind == CompareResult::Kind::Unknown ? kExitBounded : kExitDefinitive;
      return;
    }
    Rational w = parse_rational(o.width);
    enclosure = measure_ucfg_enclosure(g, w);
    s.bounds["width"] = rational_json(w);
  } else {
    throw Error(Errc::Usage, kModule, "unknown input kind '" + ext + "' (expected .aut, .gnf or .rx)");
  }

  s.result["exact"] = exact.has_value();
  if (exact) s.result["measure"] = rational_json(*exact);
  if (enclosure) s.result["enclosure"] = enclosure_json(*enclosure);
  if (!cmp) return;
  if (exact) {
    s.result["verdict"] = holds(*exact, *cmp, *eps) ? "True" : "False";
    return;
  }
  bool lo = holds(enclosure->lo, *cmp, *eps), hi = holds(enclosure->hi, *cmp, *eps);
  s.result["verdict"] = lo && hi ? "True" : (!lo && !hi ? "False" : "Unknown");
  if (lo != hi) s.exit = kExitBounded;
}

// gen-sqrtsum -------------------------------------------------------------

struct SqrtSumOpts {
  std::string d0, ds, cmp = "<=", out, report, regex_dir, construction = "separated";
  bool verify = false;
  std::string width = "1/1099511627776";
};

Json task_json(const ReprTask& t) {
  Json digits = Json::array(), period = Json::array();
  for (const auto& d : t.digits) digits.push_back(to_string(d));
  for (const auto& d : t.period) period.push_back(to_string(d));
  return Json{{"n", t.n},         {"m", t.m},   {"c", rational_json(t.c)}, {"full", t.full},
              {"k", t.k},         {"c_k", to_string(t.ck)}, {"digits", digits}, {"j1", t.j1},
              {"l", t.l},         {"period", period},       {"gamma", to_string(t.gamma)}};
}

Json audit_json(const SizeAudit& a) {
  return Json{{"size", a.size},       {"bound_expr", a.bound_expr}, {"k_bound", a.k_bound},
              {"size_ok", a.size_ok}, {"k_ok", a.k_ok},             {"K", kSizeAuditK},
              {"K_depth", kDepthAuditK}};
}

void cmd_gen_sqrtsum(Session& s, const SqrtSumOpts& o) {
  SqrtSumInstance inst;
  auto parse_int = [](const std::string& text, const std::string& what) {
    Integer v;
    if (text.empty() || v.set_str(text, 10) != 0)
      throw Error(Errc::Usage, kModule, what + " '" + text + "' is not an integer");
    return v;
  };
  inst.d0 = parse_int(o.d0, "--d0");
  std::stringstream ss(o.ds);
  for (std::string item; std::getline(ss, item, ',');) inst.ds.push_back(parse_int(item, "--ds entry"));
  inst.cmp = parse_cmp(o.cmp);

  Construction construction = parse_construction(o.construction);
  Json normalized = nullptr;
  SqrtSumGrammar built = [&] {
    if (construction == Construction::Separated) return build_separated_grammar(inst);
    NormalizedInstance ni = normalize_instance(inst);
    normalized = Json{{"n", ni.n}, {"d", to_string(ni.d)}, {"h", ni.h}, {"changed", ni.changed}};
    return build_sqrtsum_grammar(ni);
  }();
  write_file(o.out, serialize(built.grammar.grammar()));

  Json ds = Json::array();
  for (const auto& v : built.instance.ds) ds.push_back(to_string(v));
  s.result["construction"] = construction_name(construction);
  s.result["instance"] = Json{{"d0", to_string(built.instance.d0)}, {"ds", ds}, {"cmp", cmp_name(inst.cmp)}};
  s.result["normalization"] = normalized;
  s.result["alphabet_size"] = built.n;
  s.result["eps"] = rational_json(built.eps);
  s.result["offset"] = rational_json(built.offset);
  s.result["scale"] = rational_json(built.scale);
  s.result["grammar"] = o.out;
  s.result["nonterminals"] = built.grammar.nonterminal_count();
  s.result["rules"] = built.grammar.rules().size();

  Json leaves = Json::array();
  for (std::size_t i = 0; i < built.leaves.size(); ++i) {
    Json p{{"index", i + 1}, {"c", rational_json(built.c[i])}, {"root_scale", rational_json(built.root_scale[i])},
           {"size", built.leaves[i].size()}};
    if (!o.regex_dir.empty()) {
      fs::create_directories(o.regex_dir);
      std::string path = (fs::path(o.regex_dir) / ("C" + std::to_string(i + 1) + ".rx")).string();
      write_file(path, serialize(RegexFile{built.grammar.alphabet(), built.leaves[i]}));
      p["regex"] = path;
    }
    leaves.push_back(p);
  }
  s.result["leaves"] = leaves;
  Json syntheses = Json::array();
  for (const auto& rr : built.syntheses)
    syntheses.push_back(Json{{"task", task_json(rr.task)}, {"audit", audit_json(regex_size_audit(rr.regex, rr.task))}});
  s.result["syntheses"] = syntheses;

  if (o.verify) {
    Rational w = parse_rational(o.width);
    SqrtSumReport rep = verify_instance(built, w);
    Json v{{"lint", Json{{"ambiguous", rep.lint.ambiguous},
                         {"bound", rep.lint.bound},
                         {"witness", rep.lint.witness ? Json(built.grammar.alphabet().render(*rep.lint.witness))
                                                      : Json(nullptr)}}},
           {"c_exact", rep.c_exact},
           {"enclosure", rep.enclosure ? enclosure_json(*rep.enclosure) : Json(nullptr)},
           {"eps_in_enclosure", rep.eps_in_enclosure},
           {"verdict", kind_name(rep.verdict)},
           {"consistent", rep.consistent}};
    if (!rep.enclosure_error.empty()) v["enclosure_error"] = rep.enclosure_error;
    if (rep.expected) {
      v["expected"] = rational_json(*rep.expected);
      v["expected_contained"] = rep.expected_contained ? Json(*rep.expected_contained) : Json(nullptr);
      v["fixpoint_identity"] = *rep.fixpoint_identity;
      v["truth"] = *rep.truth;
    }
    s.result["verification"] = v;
    s.bounds["width"] = rational_json(w);
    s.bounds["lint_length"] = rep.lint.bound;
    s.exit = rep.verdict == CompareResult::Kind::Unknown ? kExitBounded : kExitDefinitive;
  }
}

// gen-repr ----------------------------------------------------------------

struct ReprOpts {
  int n = 0, m = 0;
  std::string c, out, mode = "auto";
};

void cmd_gen_repr(Session& s, const ReprOpts& o) {
  ReprMode mode = ReprMode::Auto;
  if (o.mode == "finite") mode = ReprMode::Finite;
  else if (o.mode == "periodic") mode = ReprMode::Periodic;
  else if (o.mode != "auto") throw Error(Errc::Usage, kModule, "--mode must be auto, finite or periodic");
  Rational c = parse_rational(o.c);
  ReprResult rr = repr_regex(o.n, o.m, c, mode);
  RegexFile f{Alphabet::indexed(o.n, "a"), rr.regex};
  s.result["task"] = task_json(rr.task);
  s.result["audit"] = audit_json(regex_size_audit(rr.regex, rr.task));
  s.result["regex"] = to_text(rr.regex, f.alphabet);
  s.result["measure"] = rational_json(measure_regex_compositional(rr.regex, o.n));
  if (!o.out.empty()) {
    write_file(o.out, serialize(f));
    s.result["output"] = o.out;
  }
}

// oracle ------------------------------------------------------------------

struct OracleOpts {
  std::string input;
  int upto = 6;
};

void cmd_oracle(Session& s, const OracleOpts& o) {
  std::string ext = extension(o.input);
  WordsByLength words;
  std::optional<Alphabet> alphabet;
  if (ext == ".gnf") {
    Grammar g = parse_grammar(s.read(o.input));
    words = enumerate_words(g, o.upto);
    alphabet = g.alphabet();
  } else if (ext == ".aut") {
    FiniteAutomaton m = s.automaton(o.input);
    words = enumerate_words(m, o.upto);
    alphabet = m.alphabet();
  } else if (ext == ".rx") {
    RegexFile f = s.regex(o.input);
    words = enumerate_words(f.regex, o.upto);
    alphabet = f.alphabet;
  } else {
    throw Error(Errc::Usage, kModule, "unknown input kind '" + ext + "'");
  }
  Json counts = Json::array(), listed = Json::array();
  for (const auto& level : words) {
    counts.push_back(level.size());
    for (const auto& w : level)
      if (listed.size() < 1000) listed.push_back(words_json(*alphabet, w));
  }
  s.result["counts"] = counts;
  s.result["words"] = listed;
  s.result["words_truncated"] = listed.size() == 1000;
  s.bounds["upto"] = o.upto;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of unambiguous grammars and automata", "ucfg"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress the JSON report on stdout");

  ParseOpts parse_o;
  auto* parse = app.add_subcommand("parse", "Parse a grammar and optionally lint it");
  parse->add_option("--grammar", parse_o.grammar)->required();
  parse->add_option("--check-unambiguous-up-to", parse_o.lint);

  CountOpts count_o;
  auto* count = app.add_subcommand("count", "Counting function prefix of a grammar");
  count->add_option("--grammar", count_o.grammar)->required();
  count->add_option("--upto", count_o.upto)->required()->check(CLI::NonNegativeNumber);

  UniversalOpts uni_o;
  auto* uni = app.add_subcommand("universal", "Bounded universality for an unambiguous grammar");
  uni->add_option("--grammar", uni_o.grammar)->required();
  uni->add_option("--bound", uni_o.bound)->check(CLI::NonNegativeNumber);
  uni->add_option("--emit-reals", uni_o.emit_reals);

  std::string ufa_path;
  auto* ufa = app.add_subcommand("universal-ufa", "Universality for an unambiguous automaton");
  ufa->add_option("--aut", ufa_path)->required();

  IncludeOpts inc_o;
  auto* inc = app.add_subcommand("include", "Inclusion of an NFA in an unambiguous automaton or grammar");
  inc->add_option("--lhs", inc_o.lhs)->required();
  inc->add_option("--rhs", inc_o.rhs)->required();
  inc->add_option("--bound", inc_o.bound)->check(CLI::NonNegativeNumber);
  inc->add_option("--dump-dir", inc_o.dump_dir);
  inc->add_option("--emit-reals", inc_o.emit_reals);

  MeasureOpts mea_o;
  auto* mea = app.add_subcommand("measure", "Coin-flip measure");
  mea->add_option("--input", mea_o.input)->required();
  mea->add_option("--width", mea_o.width);
  mea->add_option("--cmp", mea_o.cmp);
  mea->add_option("--threshold", mea_o.threshold);

  SqrtSumOpts sq_o;
  auto* sq = app.add_subcommand("gen-sqrtsum", "Grammar whose measure encodes a sum of square roots");
  sq->add_option("--d0", sq_o.d0)->required();
  sq->add_option("--ds", sq_o.ds)->required();
  sq->add_option("--cmp", sq_o.cmp);
  sq->add_option("--out", sq_o.out)->required();
  sq->add_option("--report", sq_o.report);
  sq->add_option("--regex-dir", sq_o.regex_dir);
  sq->add_option("--construction", sq_o.construction, "separated (default) or direct");
  sq->add_flag("--verify", sq_o.verify);
  sq->add_option("--width", sq_o.width);

  ReprOpts rep_o;
  auto* rep = app.add_subcommand("gen-repr", "Unambiguous expression with a given measure");
  rep->add_option("--n", rep_o.n)->required();
  rep->add_option("--m", rep_o.m)->required();
  rep->add_option("--c", rep_o.c)->required();
  rep->add_option("--mode", rep_o.mode);
  rep->add_option("--out", rep_o.out);

  OracleOpts ora_o;
  auto* ora = app.add_subcommand("oracle", "Brute-force word enumeration");
  ora->add_option("--input", ora_o.input)->required();
  ora->add_option("--upto", ora_o.upto)->required()->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Json command = Json::array();
  for (std::size_t i = 1; i < args.size(); ++i) command.push_back(args[i]);
  Json report{{"schema", 1}, {"command", command}};

  Session s;
  auto start = std::chrono::steady_clock::now();
  std::string report_path;
  int code = kExitDefinitive;
  try {
    if (*parse) cmd_parse(s, parse_o);
    else if (*count) cmd_count(s, count_o);
    else if (*uni) cmd_universal(s, uni_o);
    else if (*ufa) cmd_universal_ufa(s, ufa_path);
    else if (*inc) cmd_include(s, inc_o);
    else if (*mea) cmd_measure(s, mea_o);
    else if (*sq) {
      report_path = sq_o.report;
      cmd_gen_sqrtsum(s, sq_o);
    } else if (*rep) cmd_gen_repr(s, rep_o);
    else if (*ora) cmd_oracle(s, ora_o);
    code = s.exit;
    report["inputs"] = s.inputs;
    report["result"] = s.result;
    report["bounds"] = s.bounds;
  } catch (const Error& e) {
    code = e.kind() == Errc::Usage ? kExitUsage : kExitError;
    report["inputs"] = s.inputs;
    Json error{{"code", e.code()}, {"message", e.what()}};
    if (const auto* amb = dynamic_cast<const AmbiguityDetected*>(&e); amb && amb->length())
      error["length"] = *amb->length();
    report["error"] = error;
    err << "error [" << e.code() << "]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = kExitError;
    report["inputs"] = s.inputs;
    report["error"] = Json{{"code", "cli.internal"}, {"message", e.what()}};
    err << "error: " << e.what() << '\n';
  }
  auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  report["timing_ms"] = elapsed.count();
  report["exit"] = code;

  std::string text = report.dump(2);
  if (!report_path.empty()) {
    try {
      write_file(report_path, text + "\n");
    } catch (const Error& e) {
      err << "error [" << e.code() << "]: " << e.what() << '\n';
      code = kExitError;
    }
  }
  if (!quiet) out << text << '\n';
  return code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ucfg::cli
