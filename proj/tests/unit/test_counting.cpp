#include <doctest.h>

#include "generators.hpp"
#include "ucfg/counting.hpp"
#include "ucfg/error.hpp"
#include "ucfg/fixtures.hpp"

using namespace ucfg;
using testing::Rng;

namespace {

std::optional<Word> first_missing(const FiniteAutomaton& m, int max_len) {
  for (const Word& w : testing::all_words(m.alphabet().size(), max_len))
    if (!accepts(m, w)) return w;
  return std::nullopt;
}

}  // namespace

TEST_CASE("automaton counts agree with enumeration") {
  Rng rng(31);
  for (int iter = 0; iter < 80; ++iter) {
    FiniteAutomaton m = testing::random_ufa(rng, testing::ab(), 4);
    auto enumerated = word_counts(enumerate_words(m, 8)).counts;
    CHECK(ufa_counts(m, 8).counts == enumerated);
  }
}

TEST_CASE("ambiguous automata are rejected by the counter") {
  FiniteAutomaton m = parse_automaton("alphabet a\nstates p q r\ninitial p\naccepting q r\ntrans p a q\ntrans p a r\n");
  try {
    ufa_counts(m, 3);
    FAIL("no ambiguity reported");
  } catch (const AmbiguityDetected& e) {
    CHECK(e.code() == "counting.ambiguity");
  }
}

TEST_CASE("complete universality for unambiguous automata") {
  CHECK(ufa_universal(fixtures::sigma_star_dfa()).kind == UniversalityVerdict::Kind::Universal);
  CHECK(ufa_universal(fixtures::even_odd_ufa()).kind == UniversalityVerdict::Kind::Universal);
  auto v = ufa_universal(fixtures::a_star_dfa());
  CHECK(v.kind == UniversalityVerdict::Kind::NotUniversal);
  CHECK(v.witness == Word{1});

  Rng rng(8);
  for (int iter = 0; iter < 150; ++iter) {
    FiniteAutomaton m = testing::random_ufa(rng, testing::ab(), 4);
    // a missing word, if any, exists at length <= state count
    auto brute = first_missing(m, m.state_count() + 1);
    auto got = ufa_universal(m);
    CHECK((got.kind == UniversalityVerdict::Kind::Universal) == !brute.has_value());
    if (brute) {
      CHECK(got.witness == brute);
      CHECK(got.witness_length == static_cast<int>(brute->size()));
    }
  }
}

TEST_CASE("counting system counts derivation trees") {
  Rng rng(5);
  for (int iter = 0; iter < 60; ++iter) {
    ShortGnfGrammar g = testing::random_gnf(rng, testing::ab(), 4);
    PrefixTable t = eval_prefix(ucfg_counting_system(g), 5);
    for (int n = 0; n <= 5; ++n) {
      Integer total = 0;
      Word w(n, 0);
      do total += count_derivations(g.grammar(), w);
      while (next_word(w, 2));
      CHECK(t.values[0][n] == Rational(total));
    }
  }
}

TEST_CASE("bounded universality for grammars") {
  auto u = ucfg_universal(fixtures::universal_grammar(), 200);
  CHECK(u.kind == UniversalityVerdict::Kind::UniversalUpTo);
  CHECK(u.bound == 200);

  auto a = ucfg_universal(fixtures::a_only_grammar());
  CHECK(a.kind == UniversalityVerdict::Kind::NotUniversal);
  CHECK(a.witness == Word{1});

  auto y = ucfg_universal(fixtures::y2_grammar());
  CHECK(y.witness_length == 4);
  CHECK(y.witness == Word{0, 0, 0, 0});

  auto e = ucfg_universal(fixtures::exponential_witness_family(5), 100);
  CHECK(e.witness_length == 32);
  CHECK(e.witness == Word(32, 0));

  ShortGnfGrammar amb = validate_short_gnf(parse_grammar("alphabet a\nstart S\nS ->\nS -> a E S\nS -> a F E\nE ->\nF ->\n"));
  try {
    ucfg_universal(amb, 10);
    FAIL("no ambiguity reported");
  } catch (const AmbiguityDetected& err) {
    CHECK(err.length() == 1);
  }
}

TEST_CASE("missing words for grammars agree with brute force") {
  Rng rng(77);
  int checked = 0;
  for (int iter = 0; iter < 200 && checked < 40; ++iter) {
    ShortGnfGrammar g = testing::random_gnf(rng, testing::ab(), 3);
    if (check_unambiguous_up_to(g, 6).ambiguous) continue;
    auto counts = eval_prefix(ucfg_counting_system(g), 5).values[0];
    for (int n = 0; n <= 5; ++n) {
      if (counts[n] == Rational(Integer(1) << n)) continue;
      Word w(n, 0);
      while (recognizes(g.grammar(), w)) next_word(w, 2);
      CHECK(shortest_missing_word(g, n) == w);
      ++checked;
      break;
    }
  }
  CHECK(checked > 10);
}
