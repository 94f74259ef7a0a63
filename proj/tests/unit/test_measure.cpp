#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "ucfg/error.hpp"
#include "ucfg/fixtures.hpp"
#include "ucfg/measure.hpp"

using namespace ucfg;
using testing::Rng;

namespace {

Rational partial_measure(const WordsByLength& words, int n) {
  Rational s = 0;
  for (std::size_t len = 0; len < words.size(); ++len) s += Rational(static_cast<long>(words[len].size())) * word_measure(len, n);
  return s;
}

// Upper bound for the measure of words longer than L.
Rational length_tail(int n, int L) { return rpow(Rational(n, n + 1), L + 1); }

}  // namespace

TEST_CASE("word measure") {
  CHECK(word_measure(0, 2) == Rational(1, 3));
  CHECK(word_measure(Word{0, 1}, 2) == Rational(1, 27));
  // Σ^* has measure 1
  CHECK(measure_automaton_exact(fixtures::sigma_star_dfa()).value == Rational(1));
}

TEST_CASE("known automaton measures") {
  CHECK(measure_automaton_exact(fixtures::a_star_dfa()).value == Rational(1, 2));
  CHECK(measure_automaton_exact(fixtures::even_length_dfa()).value == Rational(3, 5));
  CHECK(measure_automaton_exact(fixtures::even_odd_ufa()).value == Rational(1));
  FiniteAutomaton amb = parse_automaton("alphabet a\nstates p q r\ninitial p\naccepting q r\ntrans p a q\ntrans p a r\n");
  CHECK_THROWS_AS(measure_automaton_exact(amb), AmbiguityDetected);
}

TEST_CASE("automaton measures lie within enumerated partial sums") {
  Rng rng(2024);
  for (int iter = 0; iter < 60; ++iter) {
    FiniteAutomaton m = testing::random_ufa(rng, testing::ab(), 4);
    auto r = measure_automaton_exact(m);
    REQUIRE(r.exact);
    Rational lo = partial_measure(enumerate_words(m, 10), 2);
    CHECK(lo <= *r.value);
    CHECK(*r.value <= lo + length_tail(2, 10));
  }
}

TEST_CASE("compositional regex measure agrees with the position automaton") {
  Rng rng(55);
  int checked = 0;
  for (int iter = 0; iter < 400 && checked < 80; ++iter) {
    Regex e = testing::random_regex(rng, 2, 4);
    std::optional<FiniteAutomaton> nfa;
    try {
      nfa = regex_to_nfa(e, testing::ab());
    } catch (const AmbiguityDetected&) {
      // multiplicities on the empty prefix that no automaton can carry
      CHECK_THROWS_AS(measure_regex_compositional(e, 2), AmbiguityDetected);
      continue;
    }
    const FiniteAutomaton& m = *nfa;
    if (find_ambiguous_word(trim(m))) {
      CHECK_THROWS_AS(measure_regex_compositional(e, 2), AmbiguityDetected);
      continue;
    }
    CHECK(measure_regex_compositional(e, 2) == measure_automaton_exact(m).value);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("sub-alphabet balls") {
  // m-letter words of length <= k over n letters
  CHECK(sub_alphabet_ball_measure(3, 2, 0) == Rational(1, 4));
  CHECK(sub_alphabet_ball_measure(3, 2, 1) == Rational(1, 4) + Rational(2, 16));
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= n; ++m)
      for (int k = 0; k <= 6; ++k) {
        // closed form: (1/(n+1)) * sum_{i<=k} (m/(n+1))^i
        Rational closed = 0;
        for (int i = 0; i <= k; ++i) closed += rpow(Rational(m, n + 1), i);
        closed /= n + 1;
        CHECK(sub_alphabet_ball_measure(n, m, k) == closed);
      }
}

TEST_CASE("grammar enclosures") {
  MeasureEnclosure x2 = measure_ucfg_enclosure(fixtures::exponential_witness_family(2, true), pow2_neg(40));
  CHECK(x2.lo <= Rational(1, 32));
  CHECK(Rational(1, 32) <= x2.hi);
  CHECK(x2.hi - x2.lo <= pow2_neg(40));

  MeasureEnclosure dyck = measure_ucfg_terms(fixtures::dyck_grammar(), 200);
  CHECK(dyck.tail == rpow(Rational(2, 3), 201));
  // Catalan generating function at 1/9, divided by 3
  double c = (1 - std::sqrt(1 - 4.0 / 9)) / (2.0 / 9) / 3;
  CHECK(dyck.lo.get_d() <= c + 1e-12);
  CHECK(c - 1e-12 <= dyck.hi.get_d());

  CHECK_THROWS_AS(measure_ucfg_terms(fixtures::ambiguous_grammar(), 4), AmbiguityDetected);
  try {
    measure_ucfg_enclosure(fixtures::dyck_grammar(), pow2_neg(200), 50);
    FAIL("budget not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == "measure.budget");
  }
}

TEST_CASE("comparisons against thresholds") {
  ShortGnfGrammar x2 = fixtures::exponential_witness_family(2, true);
  CHECK(compare_measure(x2, Cmp::Le, Rational(1, 31)).kind == CompareResult::Kind::True);
  CHECK(compare_measure(x2, Cmp::Gt, Rational(1, 31)).kind == CompareResult::Kind::False);
  CHECK(compare_measure(x2, Cmp::Ge, Rational(1, 33)).kind == CompareResult::Kind::True);
  CHECK(compare_measure(x2, Cmp::Le, Rational(1, 32), pow2_neg(64)).kind == CompareResult::Kind::Unknown);

  for (Cmp c : {Cmp::Le, Cmp::Lt, Cmp::Gt, Cmp::Ge}) {
    CHECK(parse_cmp(cmp_name(c)) == c);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(holds(a, c, b) == holds(b, flip(c), a));
  }
  CHECK_THROWS_AS(parse_cmp("=="), Error);
}
