#include "ucfg/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "ucfg/error.hpp"

namespace ucfg {

Grammar::Grammar(Alphabet alphabet, const std::string& start_name) : alphabet_(std::move(alphabet)) {
  add_nonterminal(start_name);
}

std::optional<int> Grammar::find_nonterminal(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Grammar::add_nonterminal(const std::string& name) {
  if (name.empty() || name == "->" || name[0] == '#' ||
      std::any_of(name.begin(), name.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
    throw Error(Errc::Validation, "lang", "invalid nonterminal name '" + name + "'");
  if (alphabet_.contains(name))
    throw Error(Errc::Validation, "lang", "nonterminal '" + name + "' clashes with a letter");
  if (index_.count(name)) throw Error(Errc::Validation, "lang", "duplicate nonterminal '" + name + "'");
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

int Grammar::ensure_nonterminal(const std::string& name) {
  if (auto found = find_nonterminal(name)) return *found;
  return add_nonterminal(name);
}

std::string Grammar::fresh_name(const std::string& stem) const {
  std::string name = stem;
  while (index_.count(name) || alphabet_.contains(name)) name += '\'';
  return name;
}

void Grammar::add_production(int lhs, std::vector<Symbol> rhs) {
  if (lhs < 0 || lhs >= nonterminal_count())
    throw Error(Errc::Validation, "lang", "production for undeclared nonterminal");
  for (const Symbol& s : rhs) {
    int bound = s.terminal ? alphabet_.size() : nonterminal_count();
    if (s.index < 0 || s.index >= bound)
      throw Error(Errc::Validation, "lang", "production uses an undeclared symbol");
  }
  if (!seen_.emplace(lhs, rhs).second) {
    std::string text = names_[lhs] + " ->";
    for (const Symbol& s : rhs) text += " " + symbol_name(s);
    throw Error(Errc::Validation, "lang", "duplicate production '" + text + "'");
  }
  productions_.push_back({lhs, std::move(rhs)});
}

bool Grammar::has_production(int lhs, const std::vector<Symbol>& rhs) const {
  return seen_.count({lhs, rhs}) != 0;
}

std::string Grammar::symbol_name(const Symbol& s) const {
  return s.terminal ? alphabet_.letter(s.index) : names_.at(s.index);
}

bool operator==(const Grammar& a, const Grammar& b) {
  return a.alphabet() == b.alphabet() && a.nonterminal_names() == b.nonterminal_names() &&
         a.productions() == b.productions();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(Errc::Parse, "lang", "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      auto toks = tokenize(raw);
      if (!toks.empty()) lines.push_back({number, std::move(toks)});
    }
  }

  std::optional<std::vector<std::string>> letters;
  std::optional<std::string> start;
  std::vector<std::string> declared;
  std::vector<const Line*> rules;
  for (const Line& l : lines) {
    const std::string& head = l.tokens[0];
    if (head == "alphabet" && (l.tokens.size() < 2 || l.tokens[1] != "->")) {
      if (letters) parse_fail(l.number, "second 'alphabet' line");
      if (l.tokens.size() < 2) parse_fail(l.number, "empty alphabet");
      letters.emplace(l.tokens.begin() + 1, l.tokens.end());
    } else if (head == "start" && (l.tokens.size() < 2 || l.tokens[1] != "->")) {
      if (start) parse_fail(l.number, "second 'start' line");
      if (l.tokens.size() != 2) parse_fail(l.number, "'start' takes exactly one symbol");
      start = l.tokens[1];
    } else if (head == "nonterminals" && (l.tokens.size() < 2 || l.tokens[1] != "->")) {
      declared.insert(declared.end(), l.tokens.begin() + 1, l.tokens.end());
    } else {
      if (l.tokens.size() < 2 || l.tokens[1] != "->") parse_fail(l.number, "expected 'X -> ...'");
      rules.push_back(&l);
    }
  }
  if (!letters) throw Error(Errc::Parse, "lang", "missing 'alphabet' line");
  if (!start) throw Error(Errc::Parse, "lang", "missing 'start' line");

  Alphabet alphabet = [&] {
    try {
      return Alphabet(*letters);
    } catch (const Error& e) {
      throw Error(Errc::Parse, "lang", e.what());
    }
  }();
  if (alphabet.contains(*start)) throw Error(Errc::Validation, "lang", "start symbol '" + *start + "' is a letter");
  Grammar g(alphabet, *start);
  for (const std::string& name : declared) {
    if (alphabet.contains(name)) throw Error(Errc::Validation, "lang", "declared nonterminal '" + name + "' is a letter");
    g.ensure_nonterminal(name);
  }
  for (const Line* l : rules) {
    const std::string& lhs = l->tokens[0];
    if (alphabet.contains(lhs))
      throw Error(Errc::Validation, "lang",
                  "line " + std::to_string(l->number) + ": left-hand side '" + lhs + "' is a letter, not a nonterminal");
    int x = g.ensure_nonterminal(lhs);
    std::vector<Symbol> rhs;
    for (size_t i = 2; i < l->tokens.size(); ++i) {
      const std::string& tok = l->tokens[i];
      if (tok == "->") parse_fail(l->number, "unexpected '->'");
      if (auto a = alphabet.find(tok))
        rhs.push_back(Symbol::letter(*a));
      else
        rhs.push_back(Symbol::nonterminal(g.ensure_nonterminal(tok)));
    }
    try {
      g.add_production(x, std::move(rhs));
    } catch (const Error& e) {
      throw Error(e.kind(), "lang", "line " + std::to_string(l->number) + ": " + e.what());
    }
  }
  return g;
}

std::string serialize(const Grammar& g) {
  std::ostringstream out;
  out << "alphabet";
  for (const auto& a : g.alphabet().letters()) out << ' ' << a;
  out << "\nstart " << g.nonterminal_name(g.start()) << "\nnonterminals";
  for (const auto& n : g.nonterminal_names()) out << ' ' << n;
  out << '\n';
  for (const Production& p : g.productions()) {
    out << g.nonterminal_name(p.lhs) << " ->";
    for (const Symbol& s : p.rhs) out << ' ' << g.symbol_name(s);
    out << '\n';
  }
  return out.str();
}

ShortGnfGrammar validate_short_gnf(const Grammar& g) {
  ShortGnfGrammar out(g);
  out.epsilon_.assign(g.nonterminal_count(), 0);
  out.by_lhs_.assign(g.nonterminal_count(), {});
  std::vector<std::string> offending;
  for (const Production& p : g.productions()) {
    if (p.rhs.empty()) {
      out.epsilon_[p.lhs] = 1;
      continue;
    }
    if (p.rhs.size() == 3 && p.rhs[0].terminal && !p.rhs[1].terminal && !p.rhs[2].terminal) {
      out.by_lhs_[p.lhs].push_back(static_cast<int>(out.rules_.size()));
      out.rules_.push_back({p.lhs, p.rhs[0].index, p.rhs[1].index, p.rhs[2].index});
      continue;
    }
    std::string text = g.nonterminal_name(p.lhs) + " ->";
    for (const Symbol& s : p.rhs) text += " " + g.symbol_name(s);
    offending.push_back(text);
  }
  if (!offending.empty()) {
    std::string msg = "not in short Greibach normal form:";
    for (const auto& t : offending) msg += "\n  " + t;
    throw Error(Errc::Validation, "lang", msg);
  }
  return out;
}

namespace {

bool is_prefixed(const Production& p) {
  if (p.rhs.empty()) return true;
  if (!p.rhs[0].terminal) return false;
  return std::all_of(p.rhs.begin() + 1, p.rhs.end(), [](const Symbol& s) { return !s.terminal; });
}

bool is_short(const Production& p) {
  return p.rhs.empty() || (p.rhs.size() == 3 && is_prefixed(p));
}

// Output rule of the binarized grammar; third == -1 encodes epsilon.
struct Rule {
  Letter letter = 0;
  int first = -1;
  int second = -1;
  bool epsilon() const { return first < 0; }
};

}  // namespace

ShortGnfGrammar binarize_prefixed(const Grammar& g) {
  std::vector<std::string> offending;
  bool already_short = true;
  for (const Production& p : g.productions()) {
    if (!is_prefixed(p)) {
      std::string text = g.nonterminal_name(p.lhs) + " ->";
      for (const Symbol& s : p.rhs) text += " " + g.symbol_name(s);
      offending.push_back(text);
    }
    already_short = already_short && is_short(p);
  }
  if (!offending.empty()) {
    std::string msg =
        "expected epsilon or a leading terminal followed by nonterminals only "
        "(general GNF conversion is not supported):";
    for (const auto& t : offending) msg += "\n  " + t;
    throw Error(Errc::Validation, "lang", msg);
  }
  if (already_short) return validate_short_gnf(g);

  Grammar out(g.alphabet(), g.nonterminal_name(0));
  for (int x = 1; x < g.nonterminal_count(); ++x) out.add_nonterminal(g.nonterminal_name(x));
  int pad = -1;
  auto padding = [&] {
    if (pad < 0) pad = out.add_nonterminal(out.fresh_name("E"));
    return pad;
  };

  // Helpers stand for V . t1 ... tm where V is an input nonterminal (or the
  // padding symbol) and t is a proper suffix of the middle of a long body.
  std::map<std::pair<int, std::vector<int>>, int> helper_ids;
  std::vector<std::pair<int, std::vector<int>>> pending;
  auto helper = [&](int v, std::vector<int> tail) {
    auto key = std::make_pair(v, tail);
    if (auto it = helper_ids.find(key); it != helper_ids.end()) return it->second;
    std::string name = "<" + out.nonterminal_name(v);
    for (int t : tail) name += "." + out.nonterminal_name(t);
    name += ">";
    int id = out.add_nonterminal(out.fresh_name(name));
    helper_ids.emplace(key, id);
    pending.push_back(std::move(key));
    return id;
  };

  std::vector<std::vector<Rule>> base(g.nonterminal_count());
  for (const Production& p : g.productions()) {
    auto& rules = base[p.lhs];
    if (p.rhs.empty()) {
      rules.push_back({});
      continue;
    }
    Letter a = p.rhs[0].index;
    size_t j = p.rhs.size() - 1;
    if (j == 0) {
      rules.push_back({a, padding(), padding()});
    } else if (j == 1) {
      rules.push_back({a, p.rhs[1].index, padding()});
    } else if (j == 2) {
      rules.push_back({a, p.rhs[1].index, p.rhs[2].index});
    } else {
      std::vector<int> middle;
      for (size_t i = 2; i < j; ++i) middle.push_back(p.rhs[i].index);
      rules.push_back({a, helper(p.rhs[1].index, middle), p.rhs[j].index});
    }
  }
  if (pad >= 0) {
    base.resize(out.nonterminal_count());
    base[pad].push_back({});
  }
  auto base_rules = [&](int v) -> const std::vector<Rule>& {
    static const std::vector<Rule> none;
    return v < static_cast<int>(base.size()) ? base[v] : none;
  };

  // Rules deriving V . tail, with the tail pushed into the third slot.
  std::vector<std::vector<Rule>> helper_rules;
  auto expand = [&](auto&& self, int v, const std::vector<int>& tail, std::vector<Rule>& acc) -> void {
    for (const Rule& r : base_rules(v)) {
      if (!r.epsilon()) {
        acc.push_back({r.letter, r.first, tail.empty() ? r.second : helper(r.second, tail)});
      } else if (tail.empty()) {
        acc.push_back({});
      } else {
        self(self, tail[0], std::vector<int>(tail.begin() + 1, tail.end()), acc);
      }
    }
  };

  // Converted input productions keep their input order.
  std::vector<size_t> emitted(g.nonterminal_count(), 0);
  for (const Production& p : g.productions()) {
    const Rule& r = base[p.lhs][emitted[p.lhs]++];
    if (r.epsilon())
      out.add_production(p.lhs, {});
    else
      out.add_production(p.lhs, {Symbol::letter(r.letter), Symbol::nonterminal(r.first), Symbol::nonterminal(r.second)});
  }
  if (pad >= 0) out.add_production(pad, {});

  for (size_t i = 0; i < pending.size(); ++i) {
    auto [v, tail] = pending[i];
    std::vector<Rule> acc;
    expand(expand, v, tail, acc);
    int id = helper_ids.at(pending[i]);
    for (const Rule& r : acc) {
      if (r.epsilon())
        out.add_production(id, {});
      else
        out.add_production(id, {Symbol::letter(r.letter), Symbol::nonterminal(r.first), Symbol::nonterminal(r.second)});
    }
  }
  return validate_short_gnf(out);
}

ShortGnfGrammar trim(const ShortGnfGrammar& g) {
  int n = g.nonterminal_count();
  std::vector<char> productive(n, 0);
  for (int x = 0; x < n; ++x) productive[x] = g.has_epsilon(x);
  for (bool changed = true; changed;) {
    changed = false;
    for (const GnfRule& r : g.rules()) {
      if (!productive[r.lhs] && productive[r.first] && productive[r.second]) {
        productive[r.lhs] = 1;
        changed = true;
      }
    }
  }
  auto usable = [&](const GnfRule& r) { return productive[r.first] && productive[r.second]; };
  std::vector<char> reachable(n, 0);
  std::vector<int> stack{g.start()};
  reachable[g.start()] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (!productive[x]) continue;
    for (int ri : g.rules_of(x)) {
      const GnfRule& r = g.rules()[ri];
      if (!usable(r)) continue;
      for (int y : {r.first, r.second})
        if (!reachable[y]) {
          reachable[y] = 1;
          stack.push_back(y);
        }
    }
  }
  std::vector<int> remap(n, -1);
  Grammar out(g.alphabet(), g.name(g.start()));
  remap[g.start()] = 0;
  for (int x = 0; x < n; ++x)
    if (x != g.start() && reachable[x] && productive[x]) remap[x] = out.add_nonterminal(g.name(x));
  for (const Production& p : g.grammar().productions()) {
    if (remap[p.lhs] < 0 || !productive[p.lhs]) continue;
    std::vector<Symbol> rhs;
    bool keep = true;
    for (const Symbol& s : p.rhs) {
      if (s.terminal) {
        rhs.push_back(s);
      } else if (remap[s.index] < 0 || !productive[s.index]) {
        keep = false;
        break;
      } else {
        rhs.push_back(Symbol::nonterminal(remap[s.index]));
      }
    }
    if (keep) out.add_production(remap[p.lhs], std::move(rhs));
  }
  return validate_short_gnf(out);
}

void GnfBuilder::rule_once(int x, Letter a, int y, int z) {
  std::vector<Symbol> rhs{Symbol::letter(a), Symbol::nonterminal(y), Symbol::nonterminal(z)};
  if (!grammar_.has_production(x, rhs)) grammar_.add_production(x, std::move(rhs));
}

void GnfBuilder::epsilon_once(int x) {
  if (!grammar_.has_production(x, {})) grammar_.add_production(x, {});
}

}  // namespace ucfg
