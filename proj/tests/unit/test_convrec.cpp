#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "ucfg/convrec.hpp"
#include "ucfg/error.hpp"

using namespace ucfg;
using testing::Rng;

namespace {

using Seq = std::vector<Rational>;

Seq convolve(const Seq& a, const Seq& b, std::size_t len) {
  Seq out(len, 0);
  for (std::size_t i = 0; i < len && i < a.size(); ++i)
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Direct evaluation: recompute every product from scratch at every index.
std::vector<Seq> naive_prefix(const ConvRecSystem& s, int N) {
  int k = s.arity();
  std::vector<Seq> f(k);
  for (int i = 0; i < k; ++i) f[i].push_back(s.initial[i]);
  for (int n = 0; n < N; ++n) {
    std::vector<Rational> next(k, 0);
    for (int i = 0; i < k; ++i)
      for (const auto& [e, c] : s.polys[i].terms()) {
        Seq prod(n + 1, 0);
        prod[0] = 1;
        for (int v = 0; v < k; ++v)
          for (int r = 0; r < e[v]; ++r) prod = convolve(prod, f[v], n + 1);
        next[i] += c * prod[n];
      }
    for (int i = 0; i < k; ++i) f[i].push_back(next[i]);
  }
  return f;
}

ConvRecSystem catalan() { return parse_crs("vars f\ninit f = 1\nrec f = f^2\n"); }

}  // namespace

TEST_CASE("Catalan numbers") {
  PrefixTable t = eval_prefix(catalan(), 10);
  std::vector<Rational> expected{1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  CHECK(t.values[0] == expected);
}

TEST_CASE("evaluator matches direct recomputation") {
  Rng rng(99);
  for (int iter = 0; iter < 60; ++iter) {
    ConvRecSystem s = testing::random_system(rng, 3, 3);
    CAPTURE(serialize(s));
    PrefixTable t = eval_prefix(s, 12);
    CHECK(t.values == naive_prefix(s, 12));
  }
}

TEST_CASE("rational data takes the general path") {
  ConvRecSystem s = parse_crs("vars f g\ninit f = 1/2\ninit g = 1\nrec f = f*g - 1/3\nrec g = 2*f^2\n");
  PrefixEvaluator ev(s);
  CHECK_FALSE(ev.integral());
  ev.extend_to(9);
  CHECK(ev.computed() == 9);
  auto naive = naive_prefix(s, 9);
  for (int n = 0; n <= 9; ++n) CHECK(ev.value(0, n) == naive[0][n]);

  PrefixEvaluator iev(catalan());
  CHECK(iev.integral());
  iev.extend_to(5);
  CHECK(iev.integer_value(0, 5) == 42);
  CHECK_THROWS_AS(ev.integer_value(0, 1), Error);
}

TEST_CASE("combine adds, subtracts and convolves") {
  Rng rng(12);
  for (int iter = 0; iter < 30; ++iter) {
    ConvRecSystem a = testing::random_system(rng, 2, 2), b = testing::random_system(rng, 2, 2);
    auto fa = naive_prefix(a, 10)[0], fb = naive_prefix(b, 10)[0];
    auto sum = eval_prefix(combine(a, b, CombineOp::Add), 10).values[0];
    auto diff = eval_prefix(combine(a, b, CombineOp::Sub), 10).values[0];
    auto conv = eval_prefix(combine(a, b, CombineOp::Conv), 10).values[0];
    Seq prod = convolve(fa, fb, 11);
    for (int n = 0; n <= 10; ++n) {
      CHECK(sum[n] == fa[n] + fb[n]);
      CHECK(diff[n] == fa[n] - fb[n]);
      CHECK(conv[n] == prod[n]);
    }
  }
}

TEST_CASE("generating-function system") {
  GfSystem g = gf_system(catalan());
  REQUIRE(g.arity() == 1);
  // y = 1 + x y^2 with x as variable 0
  Polynomial expected(2);
  expected.add_term({0, 0}, 1);
  expected.add_term({1, 2}, 1);
  CHECK(g.equations[0] == expected);
  CHECK(to_text(g, {"f"}).find("y_f") != std::string::npos);
}

TEST_CASE("growth ratios") {
  auto r = growth_ratio(catalan(), 6);
  REQUIRE(r.size() == 6);
  CHECK(r[3].second == Rational(14, 5));
  auto fib = growth_ratio(parse_crs("vars f g\ninit f = 1\ninit g = 0\nrec f = f + g\nrec g = f\n"), 40);
  CHECK(std::abs(fib.back().second.get_d() - (1 + std::sqrt(5.0)) / 2) < 1e-12);
}

TEST_CASE("zeroness falsification") {
  ConvRecSystem zero = parse_crs("vars f g\ninit f = 0\ninit g = 1\nrec f = f*g\nrec g = g^2\n");
  auto v = zeroness_falsify(zero, 50);
  CHECK_FALSE(v.nonzero);
  CHECK(v.bound == 50);
  ConvRecSystem late = parse_crs("vars f g h\ninit f = 0\ninit g = 0\ninit h = 1\nrec f = g\nrec g = h\nrec h = h\n");
  auto w = zeroness_falsify(late, 50);
  CHECK(w.nonzero);
  CHECK(w.index == 2);
}

TEST_CASE("reals sentence") {
  std::string smt = emit_reals_sentence(catalan());
  CHECK(smt.find("(set-logic QF_NRA)") != std::string::npos);
  CHECK(smt.find("(declare-fun x () Real)") != std::string::npos);
  CHECK(smt.find("(check-sat)") != std::string::npos);
  CHECK(smt.find("(/ 1 2)") != std::string::npos);  // combined degree 2
  int depth = 0;
  for (char c : smt) {
    depth += c == '(' ? 1 : c == ')' ? -1 : 0;
    CHECK(depth >= 0);
  }
  CHECK(depth == 0);
}

TEST_CASE("enclosure of a geometric series") {
  ConvRecSystem pow2 = parse_crs("vars f\ninit f = 1\nrec f = 2*f\n");
  Enclosure e = eval_gf_enclosure(pow2, Rational(1, 4), 40, 2);
  CHECK(e.lo <= 2);
  CHECK(2 <= e.hi);
  CHECK(e.hi - e.lo == e.tail);
  CHECK(e.tail == rpow(Rational(1, 2), 41) * 2);

  CHECK_THROWS_AS(eval_gf_enclosure(pow2, Rational(1, 4), 10, 1), Error);  // 2^n > 1^n
  CHECK_THROWS_AS(eval_gf_enclosure(pow2, Rational(1, 2), 10, 2), Error);
}

TEST_CASE("enclosure of the Catalan generating function") {
  Enclosure e = eval_gf_enclosure(catalan(), Rational(1, 5), 80, 4);
  double exact = (1 - std::sqrt(1 - 4.0 / 5)) / (2.0 / 5);
  CHECK(e.lo.get_d() <= exact + 1e-12);
  CHECK(exact - 1e-12 <= e.hi.get_d());
  CHECK(e.tail < Rational(1, 1000000));
}

TEST_CASE("system text format") {
  Rng rng(4);
  for (int iter = 0; iter < 40; ++iter) {
    ConvRecSystem s = testing::random_system(rng, 3, 3);
    CHECK(parse_crs(serialize(s)) == s);
  }
  for (const char* bad : {"init f = 1\n", "vars f\nrec f = g\n", "vars f\ninit f = 1\n", "vars f\nrec f = (f\n"}) {
    CAPTURE(bad);
    try {
      parse_crs(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == "convrec.parse");
    }
  }
}
