#include "ucfg/sqrtsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ucfg/error.hpp"

namespace ucfg {

namespace {

constexpr const char* kModule = "sqrtsum";

Regex sigma(int m) {
  std::vector<Regex> letters;
  for (int i = 0; i < m; ++i) letters.push_back(Regex::letter(i));
  return Regex::alt(std::move(letters));
}

Regex sigma_power(int m, int k) {
  std::vector<Regex> parts(static_cast<std::size_t>(k), sigma(m));
  return Regex::seq(std::move(parts));
}

Regex letter_power(Letter a, int k) {
  std::vector<Regex> parts(static_cast<std::size_t>(k), Regex::letter(a));
  return Regex::seq(std::move(parts));
}

double log2_of(const Integer& q) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, q.get_mpz_t());
  return static_cast<double>(exp) + std::log2(mant);
}

}  // namespace

std::optional<Integer> exact_sqrt(const Integer& v) {
  if (v < 0 || !mpz_perfect_square_p(v.get_mpz_t())) return std::nullopt;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

NormalizedInstance normalize_instance(const SqrtSumInstance& instance) {
  for (const auto& v : instance.ds)
    if (v < 0) throw Error(Errc::Validation, kModule, "negative radicand " + to_string(v));

  NormalizedInstance out;
  out.instance = instance;
  int n = static_cast<int>(instance.ds.size());
  Integer mx = 0;
  for (const auto& v : instance.ds) mx = std::max(mx, v);

  if (n >= 3 && n % 2 == 1 && mx > 0) {
    Integer sq = (n + 1) * (n + 1), p = 1;
    int h = 0;
    while (p < mx) {
      p *= sq;
      ++h;
    }
    if (p == mx) {
      out.n = n;
      out.d = p;
      out.h = h;
      return out;
    }
  }

  int target = std::max(3, n + 1);
  if (target % 2 == 0) ++target;
  Integer base = target + 1, root = base;
  int h = 1;
  while (root * root <= mx) {
    root *= base;
    ++h;
  }
  out.instance.ds.push_back(root * root);
  out.instance.ds.resize(static_cast<std::size_t>(target), Integer(0));
  out.instance.d0 += root;
  out.n = target;
  out.d = root * root;
  out.h = h;
  out.changed = true;
  return out;
}

Regex e_block(const Integer& h, int k, int m) {
  if (k < 0 || m < 1) throw Error(Errc::Domain, kModule, "e_block needs k >= 0 and m >= 1");
  Integer cap = ipow(m, static_cast<unsigned long>(k));
  if (h < 0 || h > cap)
    throw Error(Errc::Domain, kModule,
                "block of " + to_string(h) + " words exceeds m^k = " + to_string(cap));
  if (h == 0) return Regex::empty();
  if (h == cap) return sigma_power(m, k);

  std::vector<Regex> blocks;
  Integer rest = h;
  for (int i = 0; i < k && rest > 0; ++i) {
    Integer digit = rest % m;
    rest /= m;
    if (digit == 0) continue;
    std::vector<Regex> first;
    for (int a = 0; a < digit.get_si(); ++a) first.push_back(Regex::letter(a));
    blocks.push_back(Regex::seq({letter_power(m - 1, k - i - 1), Regex::alt(std::move(first)), sigma_power(m, i)}));
  }
  return Regex::alt(std::move(blocks));
}

Regex sub_alphabet_ball(int m, int k) {
  std::vector<Regex> parts;
  for (int i = 0; i <= k; ++i) parts.push_back(sigma_power(m, i));
  return Regex::alt(std::move(parts));
}

ReprResult repr_regex(int n, int m, const Rational& c_in, ReprMode mode) {
  Rational c = c_in;
  c.canonicalize();
  if (n < 1 || m < 1 || m > n) throw Error(Errc::Domain, kModule, "need 1 <= m <= n");
  Rational limit(1, n - m + 1);
  if (c < 0 || c > limit)
    throw Error(Errc::Domain, kModule, "c = " + to_string(c) + " outside [0, " + to_string(limit) + "]");

  ReprTask t;
  t.n = n;
  t.m = m;
  t.c = c;
  if (c == 0) return {Regex::empty(), t};
  if (c == limit) {
    t.full = true;
    return {Regex::star(sigma(m)), t};
  }

  // Minimal k with c < mu(Σ_m^{<=k}); acc is mu(Σ_m^{<=k-1}).
  Rational acc = 0;
  Integer mk = 1, nk = n + 1;
  for (;;) {
    Rational next = acc + Rational(mk, nk);
    next.canonicalize();
    if (c < next) break;
    acc = next;
    mk *= m;
    nk *= n + 1;
    ++t.k;
  }
  Rational scaled = (c - acc) * nk;
  t.ck = scaled.get_num() / scaled.get_den();
  Rational x = scaled - t.ck;

  // Base-(n+1) digits of x by long division, remembering remainders.
  Integer r = x.get_num(), s = x.get_den();
  std::map<Integer, int> seen;
  std::vector<Integer> digits;
  bool finite = (r == 0);
  int period_start = 0;
  while (!finite) {
    auto [it, fresh] = seen.emplace(r, static_cast<int>(digits.size()));
    if (!fresh) {
      period_start = it->second;
      break;
    }
    r *= n + 1;
    digits.push_back(r / s);
    r %= s;
    if (r == 0) finite = true;
  }
  if (finite) {
    t.digits = digits;
    t.j1 = static_cast<int>(digits.size()) + 1;
  } else {
    if (mode == ReprMode::Finite)
      throw Error(Errc::Domain, kModule,
                  "expansion of " + to_string(c) + " in base " + std::to_string(n + 1) + " does not terminate");
    t.digits.assign(digits.begin(), digits.begin() + period_start);
    t.period.assign(digits.begin() + period_start, digits.end());
    t.j1 = period_start + 1;
    t.l = static_cast<int>(t.period.size());
    for (const auto& g : t.period) t.gamma = t.gamma * (n + 1) + g;
  }

  for (std::size_t j = 1; j <= t.digits.size(); ++j) {
    Integer cap = ipow(m, static_cast<unsigned long>(t.k + static_cast<int>(j)));
    if (t.digits[j - 1] > cap)
      throw Error(Errc::Domain, kModule,
                  "digit d_" + std::to_string(j) + " = " + to_string(t.digits[j - 1]) + " exceeds m^(k+j) = " +
                      to_string(cap) + " (c = " + to_string(c) + ", k = " + std::to_string(t.k) + ")");
  }
  if (t.l > 0) {
    Integer cap = ipow(m, static_cast<unsigned long>(t.k + t.j1 - 1 + t.l));
    if (t.gamma > cap)
      throw Error(Errc::Domain, kModule,
                  "period value " + to_string(t.gamma) + " exceeds m^(k+j1-1+l) = " + to_string(cap) +
                      " (c = " + to_string(c) + ")");
  }

  std::vector<Regex> parts;
  if (t.k >= 1) parts.push_back(sub_alphabet_ball(m, t.k - 1));
  if (t.ck > 0) parts.push_back(e_block(t.ck, t.k, m));
  for (std::size_t j = 1; j <= t.digits.size(); ++j)
    if (t.digits[j - 1] > 0) parts.push_back(e_block(t.digits[j - 1], t.k + static_cast<int>(j), m));
  if (t.l > 0)
    parts.push_back(Regex::seq({e_block(t.gamma, t.k + t.j1 - 1 + t.l, m), Regex::star(e_block(1, t.l, m))}));
  return {Regex::alt(std::move(parts)), t};
}

SizeAudit regex_size_audit(const Regex& e, const ReprTask& task) {
  SizeAudit a;
  a.size = e.size();
  double lq = std::max(1.0, log2_of(task.c.get_den()));
  a.k_bound = task.n * lq;
  double base = a.k_bound + task.j1 + task.l + 1;
  a.bound_expr = base * base * base;
  a.size_ok = static_cast<double>(a.size) <= kSizeAuditK * a.bound_expr;
  a.k_ok = static_cast<double>(task.k) <= kDepthAuditK * a.k_bound;
  return a;
}

const char* construction_name(Construction c) { return c == Construction::Direct ? "direct" : "separated"; }

Construction parse_construction(const std::string& text) {
  if (text == "direct") return Construction::Direct;
  if (text == "separated") return Construction::Separated;
  throw Error(Errc::Usage, kModule, "unknown construction '" + text + "' (direct or separated)");
}

namespace {

// Right-linear rules of `nfa` (trimmed) rooted at `root`: the initial state's
// rules go to `root` and to a nonterminal `<tag>`, other states become `<tag>.q`.
void embed_automaton(GnfBuilder& b, const FiniteAutomaton& nfa, int root, const std::string& tag, int e) {
  std::vector<int> nt(nfa.state_count());
  for (int q = 0; q < nfa.state_count(); ++q)
    nt[q] = b.nonterminal(q == nfa.initial() ? tag : tag + "." + nfa.state_name(q));
  auto copy_rules = [&](int lhs, int q) {
    if (nfa.accepting(q)) b.epsilon(lhs);
    for (auto [a, r] : nfa.out(q)) b.rule(lhs, a, nt[r], e);
  };
  copy_rules(root, nfa.initial());
  for (int q = 0; q < nfa.state_count(); ++q) copy_rules(nt[q], q);
}

// X_i <- a_j X_i W_i for j <= (n+1)/2, W_i <- a_n X_i E.
void add_bracket_rules(GnfBuilder& b, int n, int xi, const std::string& tag, int e) {
  int wi = b.nonterminal("W" + tag);
  for (int j = 1; j <= (n + 1) / 2; ++j) b.rule(xi, j - 1, xi, wi);
  b.rule(wi, n - 1, xi, e);
}

}  // namespace

SqrtSumGrammar build_sqrtsum_grammar(const NormalizedInstance& ni) {
  const int n = ni.n;
  if (n < 3 || n % 2 == 0 || static_cast<int>(ni.instance.ds.size()) != n)
    throw Error(Errc::Precondition, kModule, "instance is not normalized");
  Alphabet sigma_n = Alphabet::indexed(n, "a");
  Integer d2 = ni.d * ni.d;

  GnfBuilder b(sigma_n, "X0");
  const int x0 = 0;
  const int e = b.nonterminal("E");
  b.epsilon(e);

  SqrtSumGrammar out{Construction::Direct, GnfBuilder(sigma_n, "X0").build(), ni.instance, n, 0, 0, 0, {}, {}, {}, {}};
  out.offset = Rational(n, n + 1);
  out.scale = 1 / (Rational(ni.d) * (n + 1));
  out.eps = out.offset - out.scale * ni.instance.d0;
  for (int i = 1; i <= n; ++i) {
    Rational ci = (1 - Rational(ni.instance.ds[i - 1], d2)) / 2;
    ci.canonicalize();
    ReprResult rr = repr_regex(n, n - 1, ci, ReprMode::Auto);
    out.c.push_back(ci);
    out.root_scale.push_back(Rational(1) / ni.d);
    out.leaves.push_back(rr.regex);

    std::string tag = std::to_string(i);
    int xi = b.nonterminal("X" + tag);
    b.rule(x0, i - 1, xi, e);
    embed_automaton(b, trim(regex_to_nfa(rr.regex, sigma_n)), xi, "C" + tag, e);
    add_bracket_rules(b, n, xi, tag, e);
    out.syntheses.push_back(std::move(rr));
  }
  int a = b.nonterminal("A");
  for (int j = 1; j <= (n + 1) / 2; ++j) b.rule(a, j - 1, e, e);
  out.grammar = b.build();
  return out;
}

namespace {

// Leaf language of the separated construction: optional eps plus words
// starting with a letter outside A and a_n.
std::optional<Regex> separated_leaf(int n, const Rational& c, std::vector<ReprResult>& syntheses) {
  const int alpha = (n + 1) / 2;
  std::vector<Regex> parts;
  std::vector<ReprResult> made;
  Rational rem = c;
  if (rem >= Rational(1, n + 1)) {
    parts.push_back(Regex::eps());
    rem -= Rational(1, n + 1);
  }
  rem *= n + 1;
  try {
    for (Letter g = alpha; g <= n - 2 && rem > 0; ++g) {
      Rational v = std::min(rem, Rational(1, 2));
      ReprResult rr = repr_regex(n, n - 1, v, ReprMode::Finite);
      parts.push_back(Regex::seq({Regex::letter(g), rr.regex}));
      made.push_back(std::move(rr));
      rem -= v;
    }
  } catch (const Error& err) {
    if (err.kind() != Errc::Domain) throw;
    return std::nullopt;
  }
  if (rem > 0) return std::nullopt;
  for (auto& m : made) syntheses.push_back(std::move(m));
  return Regex::alt(std::move(parts));
}

Integer isqrt(const Integer& v) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

}  // namespace

SqrtSumGrammar build_separated_grammar(const SqrtSumInstance& instance) {
  std::vector<Integer> ds;
  for (const auto& v : instance.ds) {
    if (v < 0) throw Error(Errc::Validation, kModule, "negative radicand " + to_string(v));
    if (v > 0) ds.push_back(v);
  }
  const int k = static_cast<int>(ds.size());
  int n = std::max(5, k);
  if (n % 2 == 0) ++n;
  Alphabet sigma_n = Alphabet::indexed(n, "a");

  SqrtSumGrammar out{Construction::Separated, GnfBuilder(sigma_n, "X0").build(), instance, n, 0, 0, 0, {}, {}, {},
                     {}};
  out.instance.ds = ds;

  // Common T = (n+1)^s; per entry the first M (in increasing order) whose leaf
  // can be synthesized.
  std::vector<Integer> ms;
  Integer t = 1;
  for (int s = 0;; ++s, t *= n + 1) {
    if (s > 64) throw Error(Errc::Domain, kModule, "no admissible scale found for the leaves");
    ms.clear();
    out.c.clear();
    out.leaves.clear();
    out.syntheses.clear();
    bool ok = true;
    for (const auto& d : ds) {
      Integer t2 = t * t;
      Integer hi = isqrt(t2 / d);
      Integer need = (t2 + 2 * d - 1) / (2 * d);  // ceil(T^2 / 2d)
      Integer lo = isqrt(need);
      if (lo * lo < need) ++lo;
      bool found = false;
      for (Integer m = lo; m <= hi && m < lo + 64; ++m) {
        Rational r(d * m * m, t2);
        r.canonicalize();
        Rational ci = (1 - r) / 2;
        if (auto leaf = separated_leaf(n, ci, out.syntheses)) {
          ms.push_back(m);
          out.c.push_back(ci);
          out.leaves.push_back(*leaf);
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }

  Integer lcm = 1;
  for (const auto& m : ms) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.get_mpz_t());
  std::vector<Integer> ps;
  Integer pmax = 1;
  for (const auto& m : ms) {
    ps.push_back(lcm / m);
    pmax = std::max(pmax, ps.back());
  }
  int len = 0;
  for (Integer cap = 1; cap < pmax; cap *= n) ++len;

  // lambda_i = p_i/(n+1)^(L+1) = kappa T/M_i
  Rational kappa = Rational(lcm) / (Rational(t) * ipow(n + 1, static_cast<unsigned long>(len + 1)));
  kappa.canonicalize();
  Rational total = 0;
  for (const auto& m : ms) total += Rational(t, m);
  out.offset = kappa * total;
  out.scale = kappa;
  out.eps = out.offset - kappa * instance.d0;
  for (const auto& m : ms) {
    Rational u(m, t);
    u.canonicalize();
    out.root_scale.push_back(u);
  }

  GnfBuilder b(sigma_n, "X0");
  const int x0 = 0;
  const int e = b.nonterminal("E");
  b.epsilon(e);
  for (int i = 1; i <= k; ++i) {
    std::string tag = std::to_string(i);
    int xi = b.nonterminal("X" + tag);

    // X0 <- a_i Q_i X_i with Q_i a set of p_i words of length L.
    if (len == 0) {
      b.rule(x0, i - 1, xi, e);
    } else {
      FiniteAutomaton q = trim(regex_to_nfa(e_block(ps[i - 1], len, n), sigma_n));
      std::vector<int> nt(q.state_count());
      for (int st = 0; st < q.state_count(); ++st) nt[st] = b.nonterminal("Q" + tag + "." + q.state_name(st));
      b.rule(x0, i - 1, nt[q.initial()], e);
      for (int st = 0; st < q.state_count(); ++st)
        for (auto [a, r] : q.out(st)) b.rule(nt[st], a, q.accepting(r) ? xi : nt[r], e);
    }

    embed_automaton(b, trim(regex_to_nfa(out.leaves[i - 1], sigma_n)), xi, "C" + tag, e);
    add_bracket_rules(b, n, xi, tag, e);
  }
  out.grammar = b.build();
  return out;
}

SqrtSumReport verify_instance(const SqrtSumGrammar& built, const Rational& width, int lint_len) {
  SqrtSumReport rep;
  const int n = built.n;
  const auto& inst = built.instance;

  while (lint_len > 0 && words_up_to(n, lint_len) > 500000) --lint_len;
  rep.lint = check_unambiguous_up_to(built.grammar, lint_len);

  rep.c_exact = true;
  for (std::size_t i = 0; i < built.leaves.size(); ++i) {
    const Regex& e = built.leaves[i];
    Rational comp = measure_regex_compositional(e, n);
    AutomatonMeasure am = measure_automaton_exact(regex_to_nfa(e, built.grammar.alphabet()));
    rep.c_measures.push_back(comp);
    rep.c_measures_nfa.push_back(am.value.value_or(Rational(-1)));
    if (comp != built.c[i] || !am.value || *am.value != built.c[i]) rep.c_exact = false;
  }

  try {
    rep.enclosure = measure_ucfg_enclosure(built.grammar, width);
    rep.eps_in_enclosure = rep.enclosure->lo <= built.eps && built.eps <= rep.enclosure->hi;
  } catch (const Error& err) {
    rep.enclosure_error = err.code() + ": " + err.what();
  }

  Integer total = 0;
  bool squares = true;
  std::vector<Integer> roots;
  for (const auto& v : inst.ds) {
    auto r = exact_sqrt(v);
    if (!r) {
      squares = false;
      break;
    }
    roots.push_back(*r);
    total += *r;
  }
  if (squares) {
    Rational mu = built.offset - built.scale * total;
    mu.canonicalize();
    rep.expected = mu;
    if (rep.enclosure) rep.expected_contained = rep.enclosure->lo <= mu && mu <= rep.enclosure->hi;
    rep.truth = holds(Rational(total), inst.cmp, Rational(inst.d0));
    bool identity = true;
    for (std::size_t i = 0; i < built.c.size(); ++i) {
      Rational x = 1 - built.root_scale[i] * roots[i];
      if (x != built.c[i] + x * x / 2) identity = false;
    }
    rep.fixpoint_identity = identity;
  }

  if (rep.enclosure) {
    Cmp oriented = flip(inst.cmp);
    bool lo_ok = holds(rep.enclosure->lo, oriented, built.eps);
    bool hi_ok = holds(rep.enclosure->hi, oriented, built.eps);
    if (lo_ok && hi_ok)
      rep.verdict = CompareResult::Kind::True;
    else if (!lo_ok && !hi_ok)
      rep.verdict = CompareResult::Kind::False;
  }
  if (rep.truth && rep.verdict != CompareResult::Kind::Unknown)
    rep.consistent = (*rep.truth == (rep.verdict == CompareResult::Kind::True));
  return rep;
}

}  // namespace ucfg
