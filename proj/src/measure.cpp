#include "ucfg/measure.hpp"

#include "ucfg/counting.hpp"
#include "ucfg/error.hpp"

namespace ucfg {

Rational word_measure(std::size_t length, int alphabet_size) {
  return Rational(1, 1) / Rational(ipow(alphabet_size + 1, length + 1));
}

namespace {

// Exact Gaussian elimination; nullopt when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rational f = a[row][col] / a[col][col];
      for (size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

AutomatonMeasure measure_automaton_exact(const FiniteAutomaton& m) {
  FiniteAutomaton t = trim(m);
  if (auto w = find_ambiguous_word(t))
    throw AmbiguityDetected("measure", "automaton is ambiguous on '" + t.alphabet().render(*w) + "'",
                            static_cast<int>(w->size()));
  const int s = t.state_count();
  const Rational base(t.alphabet().size() + 1);
  std::vector<std::vector<Rational>> a(s, std::vector<Rational>(s, 0));
  std::vector<Rational> b(s, 0);
  for (int q = 0; q < s; ++q) {
    a[q][q] = 1;
    if (t.accepting(q)) b[q] = 1 / base;
  }
  for (const Transition& tr : t.transitions()) a[tr.source][tr.target] -= 1 / base;
  AutomatonMeasure out;
  if (auto x = solve(a, b)) {
    out.value = (*x)[t.initial()];
    out.enclosure = {*out.value, *out.value, 0, 0};
    return out;
  }
  // Not reachable for trimmed unambiguous automata; kept as a safe path.
  out.exact = false;
  const int n = t.alphabet().size();
  const int N = 400;
  std::vector<Integer> runs = count_runs(t, N);
  Rational sum = 0;
  for (int k = 0; k <= N; ++k) sum += Rational(runs[k]) * word_measure(k, n);
  Rational tail = rpow(Rational(n, n + 1), N + 1);
  out.enclosure = {sum, sum + tail, tail, N + 1};
  return out;
}

namespace {

// Running partial sums of the counting series of g.
class SeriesSum {
 public:
  explicit SeriesSum(const ShortGnfGrammar& g)
      : ev_(ucfg_counting_system(g)), n_(g.alphabet().size()), start_(g.start()) {}

  MeasureEnclosure at(int N) {
    if (N < 0) throw Error(Errc::Domain, "measure", "negative number of terms");
    if (ev_.computed() < N) ev_.extend_to(N);
    Integer base = n_ + 1;
    for (; next_ <= N; ++next_) {
      const Integer& f = ev_.integer_value(start_, next_);
      if (f > power_)
        throw AmbiguityDetected("measure",
                                "f_S(" + std::to_string(next_) + ") = " + f.get_str() + " exceeds |Σ|^" +
                                    std::to_string(next_) + ": the grammar is ambiguous",
                                next_);
      numerator_ = numerator_ * base + f;
      power_ *= n_;
    }
    if (N != next_ - 1) throw Error(Errc::Precondition, "measure", "partial sums only move forward");
    Rational lo(numerator_, ipow(base, N + 1));
    lo.canonicalize();
    Rational tail = rpow(Rational(n_, n_ + 1), N + 1);
    return {lo, lo + tail, tail, N + 1};
  }

 private:
  PrefixEvaluator ev_;
  int n_;
  int start_;
  int next_ = 0;
  Integer numerator_ = 0;  // sum_k f(k) (n+1)^(N-k)
  Integer power_ = 1;      // n^next_
};

int terms_for_width(int n, const Rational& width, int max_terms) {
  if (width <= 0) throw Error(Errc::Domain, "measure", "target width must be positive");
  const Rational ratio(n, n + 1);
  Rational tail = ratio;  // (n/(n+1))^(N+1) at N = 0
  int N = 0;
  while (tail > width) {
    if (++N > max_terms)
      throw Error(Errc::Budget, "measure", "width " + to_string(width) + " needs more than " +
                                               std::to_string(max_terms) + " terms");
    tail *= ratio;
  }
  return N;
}

}  // namespace

MeasureEnclosure measure_ucfg_terms(const ShortGnfGrammar& g, int N) { return SeriesSum(g).at(N); }

MeasureEnclosure measure_ucfg_enclosure(const ShortGnfGrammar& g, const Rational& target_width, int max_terms) {
  int N = terms_for_width(g.alphabet().size(), target_width, max_terms);
  return SeriesSum(g).at(N);
}

namespace {

Rational compositional(const Regex& e, const Rational& base) {
  switch (e.kind()) {
    case Regex::Kind::Empty: return 0;
    case Regex::Kind::Eps: return 1 / base;
    case Regex::Kind::Letter: return 1 / (base * base);
    case Regex::Kind::Union: {
      Rational sum = 0;
      for (const Regex& c : e.children()) sum += compositional(c, base);
      return sum;
    }
    case Regex::Kind::Concat: {
      Rational acc = compositional(e.children()[0], base);
      for (size_t i = 1; i < e.children().size(); ++i) acc = base * acc * compositional(e.children()[i], base);
      return acc;
    }
    case Regex::Kind::Star: {
      Rational inner = compositional(e.child(), base);
      if (base * inner >= 1)
        throw Error(Errc::Domain, "measure", "star operand has (n+1)*mu >= 1; the iteration is ambiguous");
      return 1 / (base * (1 - base * inner));
    }
  }
  return 0;
}

}  // namespace

Rational measure_regex_compositional(const Regex& e, int alphabet_size, bool lint) {
  if (letter_bound(e) > alphabet_size)
    throw Error(Errc::Validation, "measure", "expression uses letters outside the alphabet");
  if (lint) {
    Alphabet alphabet = Alphabet::indexed(alphabet_size);
    FiniteAutomaton m = regex_to_nfa(e, alphabet);
    if (auto w = find_ambiguous_word(trim(m)))
      throw AmbiguityDetected("measure", "expression matches '" + alphabet.render(*w) + "' in two ways",
                              static_cast<int>(w->size()));
  }
  return compositional(e, Rational(alphabet_size + 1));
}

Rational sub_alphabet_ball_measure(int n, int m, int k) {
  Rational sum = 0;
  for (int j = 0; j <= k; ++j) sum += Rational(ipow(m, j)) * word_measure(j, n);
  return sum;
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Le: return "<=";
    case Cmp::Lt: return "<";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

Cmp parse_cmp(const std::string& text) {
  if (text == "<=" || text == "le") return Cmp::Le;
  if (text == "<" || text == "lt") return Cmp::Lt;
  if (text == ">" || text == "gt") return Cmp::Gt;
  if (text == ">=" || text == "ge") return Cmp::Ge;
  throw Error(Errc::Parse, "measure", "unknown comparison '" + text + "' (use <=, <, >, >= or le, lt, gt, ge)");
}

Cmp flip(Cmp c) {
  switch (c) {
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
  }
  return c;
}

bool holds(const Rational& a, Cmp c, const Rational& b) {
  switch (c) {
    case Cmp::Le: return a <= b;
    case Cmp::Lt: return a < b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

const char* kind_name(CompareResult::Kind k) {
  switch (k) {
    case CompareResult::Kind::True: return "True";
    case CompareResult::Kind::False: return "False";
    case CompareResult::Kind::Unknown: return "Unknown";
  }
  return "?";
}

CompareResult compare_measure(const ShortGnfGrammar& g, Cmp cmp, const Rational& eps, const Rational& floor) {
  if (eps < 0 || eps > 1) throw Error(Errc::Domain, "measure", "threshold must lie in [0, 1]");
  if (floor <= 0) throw Error(Errc::Domain, "measure", "width floor must be positive");
  SeriesSum series(g);
  CompareResult r;
  const int n = g.alphabet().size();
  for (unsigned long bits = 16;; bits *= 2) {
    Rational width = pow2_neg(bits);
    if (width < floor) width = floor;
    r.enclosure = series.at(terms_for_width(n, width, 1 << 22));
    const Rational& lo = r.enclosure.lo;
    const Rational& hi = r.enclosure.hi;
    // True when every value in [lo, hi] satisfies cmp, False when none does.
    bool all = holds(lo, cmp, eps) && holds(hi, cmp, eps);
    bool none = !holds(lo, cmp, eps) && !holds(hi, cmp, eps);
    if (all) {
      r.kind = CompareResult::Kind::True;
      return r;
    }
    if (none) {
      r.kind = CompareResult::Kind::False;
      return r;
    }
    if (width == floor) return r;
  }
}

}  // namespace ucfg
