#include "ucfg/convrec.hpp"

#include <cctype>
#include <sstream>
#include <variant>

#include "ucfg/error.hpp"

namespace ucfg {

int ConvRecSystem::combined_degree() const {
  int d = 0;
  for (const auto& p : polys) d += p.degree();
  return d;
}

void ConvRecSystem::validate() const {
  const int k = arity();
  if (static_cast<int>(initial.size()) != k)
    throw Error(Errc::Validation, "convrec", "number of initial values differs from number of components");
  if (!names.empty() && static_cast<int>(names.size()) != k)
    throw Error(Errc::Validation, "convrec", "number of names differs from number of components");
  for (const auto& p : polys)
    if (p.arity() != k) throw Error(Errc::Validation, "convrec", "polynomial arity differs from number of components");
}

namespace {

template <typename V>
V from_rational(const Rational& r) {
  if constexpr (std::is_same_v<V, Integer>) return r.get_num();
  else return r;
}

template <typename V>
Rational to_rational(const V& v) {
  if constexpr (std::is_same_v<V, Integer>) return Rational(v);
  else return v;
}

template <typename V>
class Engine {
 public:
  explicit Engine(const ConvRecSystem& s) : k_(s.arity()) {
    values_.resize(k_);
    for (int i = 0; i < k_; ++i) values_[i].push_back(from_rational<V>(s.initial[i]));
    terms_.resize(k_);
    for (int i = 0; i < k_; ++i) {
      for (const auto& [e, c] : s.polys[i].terms()) {
        int node = -1;
        bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        if (!constant) node = node_for(e);
        terms_[i].push_back({from_rational<V>(c), node});
      }
    }
  }

  int computed() const { return static_cast<int>(values_.empty() ? 0 : values_[0].size()) - 1; }

  void extend_to(int target) {
    if (k_ == 0) return;
    for (int n = computed(); n < target; ++n) {
      for (Node& node : nodes_) {
        if (node.prefix < 0) continue;
        V acc = 0;
        const auto& rhs = values_[node.var];
        for (int t = 0; t <= n; ++t) {
          const V& a = get(node.prefix, t);
          if (a == 0) continue;
          const V& b = rhs[n - t];
          if (b == 0) continue;
          acc += a * b;
        }
        node.seq.push_back(std::move(acc));
      }
      std::vector<V> next(k_, V(0));
      for (int i = 0; i < k_; ++i) {
        for (const Term& term : terms_[i]) {
          if (term.node < 0) {
            if (n == 0) next[i] += term.coefficient;
          } else {
            const V& v = get(term.node, n);
            if (v != 0) next[i] += term.coefficient * v;
          }
        }
      }
      for (int i = 0; i < k_; ++i) values_[i].push_back(std::move(next[i]));
    }
  }

  const V& value(int i, int n) const { return values_.at(i).at(n); }

 private:
  struct Node {
    int prefix;  // -1: the node is the bare variable `var`
    int var;
    std::vector<V> seq;
  };
  struct Term {
    V coefficient;
    int node;  // -1: constant term
  };

  const V& get(int node, int t) const {
    const Node& nd = nodes_[node];
    return nd.prefix < 0 ? values_[nd.var][t] : nd.seq[t];
  }

  int node_for(const Exponents& e) {
    if (auto it = ids_.find(e); it != ids_.end()) return it->second;
    int last = static_cast<int>(e.size()) - 1;
    while (e[last] == 0) --last;
    int total = 0;
    for (int x : e) total += x;
    Node node{-1, last, {}};
    if (total > 1) {
      Exponents smaller = e;
      --smaller[last];
      node.prefix = node_for(smaller);
    }
    nodes_.push_back(std::move(node));
    int id = static_cast<int>(nodes_.size()) - 1;
    ids_.emplace(e, id);
    return id;
  }

  int k_;
  std::vector<std::vector<V>> values_;
  std::vector<std::vector<Term>> terms_;
  std::vector<Node> nodes_;
  std::map<Exponents, int> ids_;
};

bool integral_data(const ConvRecSystem& s) {
  for (const auto& r : s.initial)
    if (r.get_den() != 1) return false;
  for (const auto& p : s.polys)
    for (const auto& [e, c] : p.terms())
      if (c.get_den() != 1) return false;
  return true;
}

}  // namespace

struct PrefixEvaluator::Impl {
  std::variant<Engine<Integer>, Engine<Rational>> engine;
};

PrefixEvaluator::PrefixEvaluator(const ConvRecSystem& s) {
  s.validate();
  if (integral_data(s))
    impl_.reset(new Impl{Engine<Integer>(s)});
  else
    impl_.reset(new Impl{Engine<Rational>(s)});
}

PrefixEvaluator::~PrefixEvaluator() = default;
PrefixEvaluator::PrefixEvaluator(PrefixEvaluator&&) noexcept = default;
PrefixEvaluator& PrefixEvaluator::operator=(PrefixEvaluator&&) noexcept = default;

int PrefixEvaluator::computed() const {
  return std::visit([](const auto& e) { return e.computed(); }, impl_->engine);
}

void PrefixEvaluator::extend_to(int n) {
  std::visit([n](auto& e) { e.extend_to(n); }, impl_->engine);
}

Rational PrefixEvaluator::value(int component, int n) const {
  return std::visit([&](const auto& e) { return to_rational(e.value(component, n)); }, impl_->engine);
}

bool PrefixEvaluator::integral() const { return impl_->engine.index() == 0; }

const Integer& PrefixEvaluator::integer_value(int component, int n) const {
  if (!integral()) throw Error(Errc::Precondition, "convrec", "system is not integral");
  return std::get<0>(impl_->engine).value(component, n);
}

PrefixTable eval_prefix(const ConvRecSystem& s, int N) {
  PrefixEvaluator ev(s);
  ev.extend_to(N);
  PrefixTable table;
  table.values.resize(s.arity());
  for (int i = 0; i < s.arity(); ++i)
    for (int n = 0; n <= N; ++n) table.values[i].push_back(ev.value(i, n));
  return table;
}

ConvRecSystem combine(const ConvRecSystem& a, const ConvRecSystem& b, CombineOp op) {
  a.validate();
  b.validate();
  if (a.arity() == 0 || b.arity() == 0) throw Error(Errc::Precondition, "convrec", "combine needs non-empty systems");
  const int ka = a.arity(), kb = b.arity(), k = 1 + ka + kb;
  std::vector<int> map_a(ka), map_b(kb);
  for (int i = 0; i < ka; ++i) map_a[i] = 1 + i;
  for (int i = 0; i < kb; ++i) map_b[i] = 1 + ka + i;

  ConvRecSystem out;
  auto name = [](const ConvRecSystem& s, int i, const std::string& fallback) {
    return s.names.empty() ? fallback + std::to_string(i + 1) : s.names[i];
  };
  out.names.push_back("t");
  for (int i = 0; i < ka; ++i) out.names.push_back("a." + name(a, i, "f"));
  for (int i = 0; i < kb; ++i) out.names.push_back("b." + name(b, i, "f"));
  out.polys.emplace_back(k);
  out.initial.emplace_back(0);
  for (int i = 0; i < ka; ++i) {
    out.polys.push_back(a.polys[i].remap(k, map_a));
    out.initial.push_back(a.initial[i]);
  }
  for (int i = 0; i < kb; ++i) {
    out.polys.push_back(b.polys[i].remap(k, map_b));
    out.initial.push_back(b.initial[i]);
  }
  const ConvPolynomial& pa = out.polys[1];
  const ConvPolynomial& pb = out.polys[1 + ka];
  switch (op) {
    case CombineOp::Add:
      out.polys[0] = pa + pb;
      out.initial[0] = a.initial[0] + b.initial[0];
      break;
    case CombineOp::Sub:
      out.polys[0] = pa - pb;
      out.initial[0] = a.initial[0] - b.initial[0];
      break;
    case CombineOp::Conv:
      // sigma(a*b) = a(0) sigma b + (sigma a) * b
      out.polys[0] = a.initial[0] * pb + pa * ConvPolynomial::variable(k, 1 + ka);
      out.initial[0] = a.initial[0] * b.initial[0];
      break;
  }
  return out;
}

GfSystem gf_system(const ConvRecSystem& s) {
  s.validate();
  const int k = s.arity();
  std::vector<int> shift(k);
  for (int i = 0; i < k; ++i) shift[i] = i + 1;
  GfSystem g;
  for (int i = 0; i < k; ++i) {
    Polynomial p(k + 1);
    for (const auto& [e, c] : s.polys[i].terms()) {
      Exponents ne(k + 1, 0);
      ne[0] = 1;
      for (int j = 0; j < k; ++j) ne[j + 1] = e[j];
      p.add_term(ne, c);
    }
    p += Polynomial::constant(k + 1, s.initial[i]);
    g.equations.push_back(std::move(p));
  }
  return g;
}

namespace {

template <typename Tag>
std::string poly_text(const BasicPolynomial<Tag>& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Highest degree first, reads closer to hand-written systems.
  std::vector<std::pair<Exponents, Rational>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    int dx = 0, dy = 0;
    for (int v : x.first) dx += v;
    for (int v : y.first) dy += v;
    return dx > dy;
  });
  for (const auto& [e, c] : terms) {
    Rational mag = abs(c);
    out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    first = false;
    std::vector<std::string> factors;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      factors.push_back(e[i] == 1 ? names.at(i) : names.at(i) + "^" + std::to_string(e[i]));
    }
    std::string coeff = mag.get_den() == 1 ? mag.get_num().get_str() : mag.get_str();
    if (factors.empty() || mag != 1) factors.insert(factors.begin(), coeff);
    for (size_t i = 0; i < factors.size(); ++i) out += (i ? "*" : "") + factors[i];
  }
  return out;
}

std::vector<std::string> default_names(const ConvRecSystem& s) {
  if (!s.names.empty()) return s.names;
  std::vector<std::string> names;
  for (int i = 0; i < s.arity(); ++i) names.push_back("f" + std::to_string(i + 1));
  return names;
}

}  // namespace

std::string to_text(const ConvPolynomial& p, const std::vector<std::string>& names) { return poly_text(p, names); }

std::string to_text(const GfSystem& g, const std::vector<std::string>& names) {
  std::vector<std::string> vars{"x"};
  for (const auto& n : names) vars.push_back("y_" + n);
  std::string out;
  for (int i = 0; i < g.arity(); ++i) out += vars[i + 1] + " = " + poly_text(g.equations[i], vars) + "\n";
  return out;
}

std::vector<std::pair<int, Rational>> growth_ratio(const ConvRecSystem& s, int N) {
  PrefixEvaluator ev(s);
  ev.extend_to(N);
  std::vector<std::pair<int, Rational>> out;
  for (int n = 0; n < N; ++n) {
    Rational cur = ev.value(0, n);
    if (cur == 0) continue;
    out.emplace_back(n, ev.value(0, n + 1) / cur);
  }
  return out;
}

ZeronessVerdict zeroness_falsify(PrefixEvaluator& ev, int N) {
  ZeronessVerdict v;
  v.bound = N;
  for (int n = 0; n <= N; ++n) {
    if (ev.computed() < n) ev.extend_to(std::min(N, std::max(n, 2 * ev.computed() + 8)));
    if (ev.value(0, n) != 0) {
      v.nonzero = true;
      v.index = n;
      return v;
    }
  }
  return v;
}

ZeronessVerdict zeroness_falsify(const ConvRecSystem& s, int N) {
  PrefixEvaluator ev(s);
  return zeroness_falsify(ev, N);
}

namespace {

std::string smt_rational(const Rational& r) {
  std::string mag = r.get_den() == 1 ? Integer(abs(r.get_num())).get_str()
                                     : "(/ " + Integer(abs(r.get_num())).get_str() + " " + r.get_den().get_str() + ")";
  return r < 0 ? "(- " + mag + ")" : mag;
}

std::string smt_poly(const Polynomial& p, const std::vector<std::string>& vars) {
  if (p.is_zero()) return "0";
  std::vector<std::string> terms;
  for (const auto& [e, c] : p.terms()) {
    std::vector<std::string> factors;
    if (c != 1) factors.push_back(smt_rational(c));
    for (size_t i = 0; i < e.size(); ++i)
      for (int j = 0; j < e[i]; ++j) factors.push_back(vars[i]);
    if (factors.empty()) terms.push_back("1");
    else if (factors.size() == 1) terms.push_back(factors[0]);
    else {
      std::string t = "(*";
      for (const auto& f : factors) t += " " + f;
      terms.push_back(t + ")");
    }
  }
  if (terms.size() == 1) return terms[0];
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

}  // namespace

std::string emit_reals_sentence(const ConvRecSystem& s) {
  GfSystem g = gf_system(s);
  const int k = s.arity();
  int d = std::max(1, s.combined_degree());
  std::vector<std::string> vars{"x"};
  for (int i = 0; i < k; ++i) vars.push_back("y" + std::to_string(i + 1));
  std::vector<std::string> names = default_names(s);
  std::ostringstream out;
  out << "; Generating-function system of a convolution-recursive sequence.\n"
      << "; Query: exists x, y with 0 <= x < 1/d, y = f(0) + x*p(y), y1 != 0.\n"
      << "; unsat <=> the first component is the zero sequence;\n"
      << "; sat   <=> some entry of the first component is non-zero.\n"
      << "; combined degree d = " << d << "\n";
  for (int i = 0; i < k; ++i) out << "; y" << i + 1 << " <-> " << names[i] << "\n";
  out << "(set-logic QF_NRA)\n";
  for (const auto& v : vars) out << "(declare-fun " << v << " () Real)\n";
  out << "(assert (<= 0 x))\n";
  out << "(assert (< x " << smt_rational(Rational(1, d)) << "))\n";
  for (int i = 0; i < k; ++i) out << "(assert (= y" << i + 1 << " " << smt_poly(g.equations[i], vars) << "))\n";
  if (k > 0) out << "(assert (not (= y1 0)))\n";
  out << "(check-sat)\n";
  return out.str();
}

Enclosure eval_gf_enclosure(const ConvRecSystem& s, const Rational& x, int N, const Rational& bound_base) {
  s.validate();
  if (s.arity() == 0) throw Error(Errc::Precondition, "convrec", "empty system");
  for (const auto& r : s.initial)
    if (r < 0) throw Error(Errc::Precondition, "convrec", "enclosure needs non-negative initial values");
  for (const auto& p : s.polys)
    for (const auto& [e, c] : p.terms())
      if (c < 0) throw Error(Errc::Precondition, "convrec", "enclosure needs non-negative coefficients");
  int d = std::max(1, s.combined_degree());
  if (x < 0 || x * d >= 1) throw Error(Errc::Domain, "convrec", "evaluation point must satisfy 0 <= x < 1/d");
  if (bound_base < 0 || bound_base * x >= 1)
    throw Error(Errc::Domain, "convrec", "bound_base * x must be below 1");
  PrefixEvaluator ev(s);
  ev.extend_to(N);
  Rational sum = 0, xp = 1, bp = 1;
  for (int n = 0; n <= N; ++n) {
    Rational f = ev.value(0, n);
    if (f > bp)
      throw Error(Errc::Precondition, "convrec",
                  "f(" + std::to_string(n) + ") = " + to_string(f) + " exceeds the supplied bound " +
                      to_string(bp));
    sum += f * xp;
    xp *= x;
    bp *= bound_base;
  }
  Rational r = bound_base * x;
  Rational tail = rpow(r, N + 1) / (1 - r);
  return {sum, sum + tail, tail, N + 1};
}

namespace {

class CrsLexer {
 public:
  explicit CrsLexer(std::string_view text) : text_(text) {}

  struct Token {
    enum Kind { Ident, Number, Op, End } kind;
    std::string text;
  };

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {Token::End, ""};
    char c = text_[pos_];
    size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return {Token::Number, std::string(text_.substr(start, pos_ - start))};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '.' || text_[pos_] == '\''))
        ++pos_;
      return {Token::Ident, std::string(text_.substr(start, pos_ - start))};
    }
    ++pos_;
    return {Token::Op, std::string(1, c)};
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::map<std::string, int>& vars, int line)
      : lexer_(text), vars_(vars), line_(line) {
    advance();
  }

  ConvPolynomial parse() {
    ConvPolynomial p = expr();
    if (tok_.kind != CrsLexer::Token::End) fail("unexpected '" + tok_.text + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::Parse, "convrec", "line " + std::to_string(line_) + ": " + msg);
  }
  void advance() { tok_ = lexer_.next(); }
  bool op(const char* s) const { return tok_.kind == CrsLexer::Token::Op && tok_.text == s; }
  int k() const { return static_cast<int>(vars_.size()); }

  ConvPolynomial expr() {
    ConvPolynomial p = term();
    while (op("+") || op("-")) {
      bool minus = op("-");
      advance();
      ConvPolynomial t = term();
      if (minus) p -= t;
      else p += t;
    }
    return p;
  }

  ConvPolynomial term() {
    ConvPolynomial p = factor();
    while (op("*")) {
      advance();
      p = p * factor();
    }
    return p;
  }

  ConvPolynomial factor() {
    if (op("-")) {
      advance();
      return Rational(-1) * factor();
    }
    ConvPolynomial base = atom();
    if (op("^")) {
      advance();
      if (tok_.kind != CrsLexer::Token::Number) fail("expected exponent");
      int e = std::stoi(tok_.text);
      advance();
      ConvPolynomial p = ConvPolynomial::constant(k(), 1);
      for (int i = 0; i < e; ++i) p = p * base;
      return p;
    }
    return base;
  }

  ConvPolynomial atom() {
    if (tok_.kind == CrsLexer::Token::Number) {
      Integer num(tok_.text);
      advance();
      Integer den = 1;
      if (op("/")) {
        advance();
        if (tok_.kind != CrsLexer::Token::Number) fail("expected denominator");
        den = Integer(tok_.text);
        advance();
        if (den == 0) fail("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return ConvPolynomial::constant(k(), r);
    }
    if (tok_.kind == CrsLexer::Token::Ident) {
      auto it = vars_.find(tok_.text);
      if (it == vars_.end()) fail("undeclared variable '" + tok_.text + "'");
      advance();
      return ConvPolynomial::variable(k(), it->second);
    }
    if (op("(")) {
      advance();
      ConvPolynomial p = expr();
      if (!op(")")) fail("missing ')'");
      advance();
      return p;
    }
    fail(tok_.kind == CrsLexer::Token::End ? "unexpected end of expression" : "unexpected '" + tok_.text + "'");
  }

  CrsLexer lexer_;
  const std::map<std::string, int>& vars_;
  int line_;
  CrsLexer::Token tok_{CrsLexer::Token::End, ""};
};

}  // namespace

ConvRecSystem parse_crs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  ConvRecSystem s;
  std::map<std::string, int> vars;
  std::vector<char> has_init, has_rec;
  auto fail = [](int number, const std::string& msg) -> Error {
    return Error(Errc::Parse, "convrec", "line " + std::to_string(number) + ": " + msg);
  };
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "vars") {
      if (!vars.empty()) throw fail(number, "second 'vars' line");
      for (std::string v; ls >> v;) {
        if (!vars.emplace(v, static_cast<int>(vars.size())).second) throw fail(number, "duplicate variable '" + v + "'");
        s.names.push_back(v);
      }
      if (vars.empty()) throw fail(number, "no variables declared");
      const int k = static_cast<int>(vars.size());
      s.polys.assign(k, ConvPolynomial(k));
      s.initial.assign(k, Rational(0));
      has_init.assign(k, 0);
      has_rec.assign(k, 0);
      continue;
    }
    if (head != "init" && head != "rec") throw fail(number, "unknown directive '" + head + "'");
    if (vars.empty()) throw fail(number, "'vars' must come first");
    std::string name, eq;
    if (!(ls >> name >> eq) || eq != "=") throw fail(number, "expected '" + head + " <var> = ...'");
    auto it = vars.find(name);
    if (it == vars.end()) throw fail(number, "undeclared variable '" + name + "'");
    std::string rest;
    std::getline(ls, rest);
    if (head == "init") {
      if (has_init[it->second]) throw fail(number, "second 'init' for " + name);
      has_init[it->second] = 1;
      std::string v = rest;
      v.erase(std::remove_if(v.begin(), v.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
              v.end());
      try {
        s.initial[it->second] = parse_rational(v);
      } catch (const Error& e) {
        throw fail(number, e.what());
      }
    } else {
      if (has_rec[it->second]) throw fail(number, "second 'rec' for " + name);
      has_rec[it->second] = 1;
      s.polys[it->second] = PolyParser(rest, vars, number).parse();
    }
  }
  if (vars.empty()) throw Error(Errc::Parse, "convrec", "missing 'vars' line");
  for (size_t i = 0; i < has_rec.size(); ++i)
    if (!has_rec[i]) throw Error(Errc::Parse, "convrec", "missing 'rec' for " + s.names[i]);
  return s;
}

std::string serialize(const ConvRecSystem& s) {
  std::vector<std::string> names = default_names(s);
  std::ostringstream out;
  out << "vars";
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
  for (int i = 0; i < s.arity(); ++i) out << "init " << names[i] << " = " << to_string(s.initial[i]) << '\n';
  for (int i = 0; i < s.arity(); ++i) out << "rec " << names[i] << " = " << to_text(s.polys[i], names) << '\n';
  return out.str();
}

}  // namespace ucfg
