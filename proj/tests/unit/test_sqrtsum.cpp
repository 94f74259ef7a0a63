#include <doctest.h>

#include <functional>

#include "generators.hpp"
#include "ucfg/counting.hpp"
#include "ucfg/error.hpp"
#include "ucfg/sqrtsum.hpp"

using namespace ucfg;
using testing::Rng;

namespace {

Alphabet letters(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("a" + std::to_string(i));
  return Alphabet(names);
}

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

SqrtSumInstance example(long d0) { return {d0, {16, 9, 4}, Cmp::Le}; }

}  // namespace

TEST_CASE("exact square roots") {
  CHECK(exact_sqrt(0) == Integer(0));
  CHECK(exact_sqrt(144) == Integer(12));
  CHECK_FALSE(exact_sqrt(2));
  CHECK_FALSE(exact_sqrt(-4));
}

TEST_CASE("blocks hold exactly h words of one length") {
  CHECK(e_block(0, 3, 2).kind() == Regex::Kind::Empty);
  for (int m = 1; m <= 3; ++m)
    for (int k = 0; k <= 4; ++k) {
      Integer cap = 1;
      for (int i = 0; i < k; ++i) cap *= m;
      for (Integer h = 0; h <= cap; ++h) {
        Regex e = e_block(h, k, m);
        auto words = enumerate_words(e, k + 1);
        for (int len = 0; len <= k + 1; ++len) CHECK(Integer(words[len].size()) == (len == k ? h : Integer(0)));
        for (const Word& w : words[k])
          for (Letter a : w) CHECK(a < m);
        if (h > 0) CHECK_FALSE(find_ambiguous_word(regex_to_nfa(e, letters(m))));
      }
    }
  CHECK_THROWS_AS(e_block(9, 3, 2), Error);
}

TEST_CASE("balls over a sub-alphabet") {
  for (int n = 2; n <= 4; ++n)
    for (int m = 1; m <= n; ++m)
      for (int k = 0; k <= 5; ++k)
        CHECK(measure_regex_compositional(sub_alphabet_ball(m, k), n) == sub_alphabet_ball_measure(n, m, k));
}

TEST_CASE("synthesis examples") {
  Alphabet s3 = letters(3);
  CHECK(repr_regex(3, 2, Rational(1, 2)).task.full);
  CHECK(to_text(repr_regex(3, 2, Rational(1, 2)).regex, s3) == to_text(Regex::star(Regex::alt({Regex::letter(0), Regex::letter(1)})), s3));
  CHECK(repr_regex(3, 2, Rational(1, 4)).regex == Regex::eps());
  auto r = repr_regex(3, 2, Rational(5, 16));
  CHECK(testing::word_set(enumerate_words(r.regex, 6)) == std::set<Word>{{}, {0}});
  CHECK(repr_regex(3, 2, Rational(0)).regex.kind() == Regex::Kind::Empty);

  auto p = repr_regex(3, 2, Rational(1, 3), ReprMode::Periodic);
  CHECK(p.task.l > 0);
  CHECK(measure_regex_compositional(p.regex, 3) == Rational(1, 3));
  CHECK(code_of([] { repr_regex(3, 2, Rational(1, 3), ReprMode::Finite); }) == "sqrtsum.domain");
  CHECK(code_of([] { repr_regex(3, 2, Rational(3, 4)); }) != "");
}

TEST_CASE("synthesized expressions have the requested measure") {
  Rng rng(1001);
  int built = 0;
  for (int iter = 0; iter < 400; ++iter) {
    int n = rng.uniform(2, 5), m = rng.uniform(1, n - 1);
    int ell = rng.uniform(1, 6);
    Integer q = 1;
    for (int i = 0; i < ell; ++i) q *= n + 1;
    Rational full(1, n - m + 1);
    Integer p = rng.uniform(0, 1 << 20) % q;
    Rational c(p, q);
    c.canonicalize();
    if (c > full) continue;
    std::optional<ReprResult> rr;
    try {
      rr = repr_regex(n, m, c);
    } catch (const Error& e) {
      CHECK(e.code() == "sqrtsum.domain");
      continue;
    }
    const ReprResult& r = *rr;
    CAPTURE(n);
    CAPTURE(m);
    CAPTURE(c.get_str());
    CHECK(letter_bound(r.regex) <= m);
    CHECK(measure_regex_compositional(r.regex, n) == c);
    CHECK(measure_automaton_exact(regex_to_nfa(r.regex, letters(n))).value == c);
    ++built;
  }
  CHECK(built > 100);
}

TEST_CASE("instance normalization") {
  NormalizedInstance a = normalize_instance(example(9));
  CHECK_FALSE(a.changed);
  CHECK(a.n == 3);
  CHECK(a.d == 16);
  CHECK(a.h == 1);

  NormalizedInstance b = normalize_instance({4, {10, 1, 1}, Cmp::Le});
  CHECK(b.changed);
  CHECK(b.n == 5);
  CHECK(b.instance.ds == std::vector<Integer>{10, 1, 1, 36, 0});
  CHECK(b.instance.d0 == 10);
  CHECK(b.d == 36);

  // truth is preserved on perfect squares
  Rng rng(6);
  for (int iter = 0; iter < 100; ++iter) {
    SqrtSumInstance in;
    int k = rng.uniform(1, 5);
    Integer sum = 0;
    for (int i = 0; i < k; ++i) {
      int r = rng.uniform(0, 12);
      in.ds.push_back(r * r);
      sum += r;
    }
    in.d0 = sum + rng.uniform(-1, 1);
    NormalizedInstance ni = normalize_instance(in);
    CHECK(ni.n % 2 == 1);
    CHECK(static_cast<int>(ni.instance.ds.size()) == ni.n);
    Integer nsum = 0;
    for (const auto& d : ni.instance.ds) nsum += *exact_sqrt(d);
    CHECK((sum <= in.d0) == (nsum <= ni.instance.d0));
    CHECK((sum < in.d0) == (nsum < ni.instance.d0));
  }
}

TEST_CASE("grammar as described: frozen numbers") {
  SqrtSumGrammar g = build_sqrtsum_grammar(normalize_instance(example(9)));
  CHECK(g.n == 3);
  CHECK(g.c == std::vector<Rational>{Rational(15, 32), Rational(247, 512), Rational(63, 128)});
  CHECK(g.eps == Rational(39, 64));
  for (std::size_t i = 0; i < g.c.size(); ++i) CHECK(measure_regex_compositional(g.leaves[i], 3) == g.c[i]);
  std::vector<Rational> x{Rational(3, 4), Rational(13, 16), Rational(7, 8)};
  for (std::size_t i = 0; i < 3; ++i) {
    Rational xi = 1 - g.root_scale[i] * *exact_sqrt(g.instance.ds[i]);
    CHECK(xi == x[i]);
    CHECK(xi == g.c[i] + xi * xi / 2);
  }
}

TEST_CASE("grammar as described is ambiguous") {
  SqrtSumGrammar g = build_sqrtsum_grammar(normalize_instance(example(9)));
  AmbiguityVerdict v = check_unambiguous_up_to(g.grammar, 7);
  REQUIRE(v.ambiguous);
  CHECK(count_derivations(g.grammar.grammar(), *v.witness) >= 2);
  CHECK(*v.witness == Word{0, 0, 0, 2, 0, 2});
  CHECK(count_derivations(g.grammar.grammar(), Word{0, 0, 0, 0, 2, 0, 2}) >= 2);
  CHECK_THROWS_AS(measure_ucfg_enclosure(g.grammar, pow2_neg(40)), AmbiguityDetected);
  // the derivation-tree series still sums to the fixpoint value from below
  PrefixTable t = eval_prefix(ucfg_counting_system(g.grammar), 120);
  Rational partial = 0;
  for (int k = 0; k <= 120; ++k) partial += t.values[0][k] * word_measure(k, 3);
  CHECK(partial <= Rational(39, 64));
  CHECK(Rational(39, 64) - partial < Rational(1, 100));
}

TEST_CASE("separated construction") {
  for (long d0 : {9L, 10L, 8L}) {
    SqrtSumGrammar g = build_separated_grammar(example(d0));
    CAPTURE(d0);
    CHECK(g.n == 5);
    CHECK(g.eps == g.offset - g.scale * d0);
    SqrtSumReport r = verify_instance(g, pow2_neg(40), 6);
    CHECK_FALSE(r.lint.ambiguous);
    CHECK(r.c_exact);
    CHECK(r.fixpoint_identity == true);
    REQUIRE(r.enclosure);
    CHECK(r.expected_contained == true);
    CHECK(r.consistent);
    auto want = d0 == 9 ? CompareResult::Kind::Unknown : d0 == 10 ? CompareResult::Kind::True : CompareResult::Kind::False;
    CHECK(r.verdict == want);
  }
  CHECK(build_separated_grammar(example(9)).eps == Rational(265, 5184));
  // only zero radicands: the sum is 0
  SqrtSumReport z = verify_instance(build_separated_grammar({1, {0, 0}, Cmp::Le}), pow2_neg(40), 4);
  CHECK(z.verdict == CompareResult::Kind::True);
  CHECK(z.truth == true);
}
