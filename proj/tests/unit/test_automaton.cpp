#include <doctest.h>

#include "generators.hpp"
#include "ucfg/automaton.hpp"
#include "ucfg/error.hpp"
#include "ucfg/fixtures.hpp"
#include "ucfg/oracle.hpp"

using namespace ucfg;
using testing::Rng;

namespace {

std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("automaton text round-trips") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    FiniteAutomaton m = testing::random_nfa(rng, testing::ab(), 4);
    CHECK(parse_automaton(serialize(m)) == m);
  }
  for (const auto& m : {fixtures::a_star_dfa(), fixtures::even_odd_ufa()}) CHECK(parse_automaton(serialize(m)) == m);
}

TEST_CASE("automaton parse errors") {
  CHECK(code_of([] { parse_automaton("states p\ninitial p\n"); }) == "lang.parse");
  CHECK(code_of([] { parse_automaton("alphabet a\nstates p\ninitial q\n"); }) != "");
  CHECK(code_of([] { parse_automaton("alphabet a\nstates p\ninitial p\ntrans p c p\n"); }) != "");
  CHECK(code_of([] { parse_automaton("alphabet a\nstates p\ninitial p\ntrans p a p\ntrans p a p\n"); }) ==
        "lang.validation");
}

TEST_CASE("determinism and totality") {
  CHECK(is_deterministic(fixtures::a_star_dfa()));
  CHECK_FALSE(is_total(fixtures::a_star_dfa()));
  CHECK(is_total(totalize(fixtures::a_star_dfa())));
  CHECK_FALSE(is_deterministic(fixtures::even_odd_ufa()));
  auto nd = find_nondeterminism(fixtures::even_odd_ufa());
  REQUIRE(nd.has_value());
  CHECK(nd->first == 0);
}

TEST_CASE("complement needs determinism and flips membership") {
  CHECK(code_of([] { complement_dfa(fixtures::even_odd_ufa()); }) == "lang.precondition");
  Rng rng(2);
  for (int i = 0; i < 40; ++i) {
    FiniteAutomaton d = testing::random_dfa(rng, testing::ab(), 4);
    FiniteAutomaton c = complement_dfa(d);
    for (const Word& w : testing::all_words(2, 6)) CHECK(accepts(d, w) != accepts(c, w));
  }
}

TEST_CASE("product and union agree with membership") {
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    FiniteAutomaton a = testing::random_nfa(rng, testing::ab(), 3);
    FiniteAutomaton b = testing::random_nfa(rng, testing::ab(), 3);
    FiniteAutomaton p = product(a, b), u = disjoint_union(a, b);
    for (const Word& w : testing::all_words(2, 6)) {
      CHECK(accepts(p, w) == (accepts(a, w) && accepts(b, w)));
      CHECK(accepts(u, w) == (accepts(a, w) || accepts(b, w)));
      CHECK(run_multiplicity(p, w) == run_multiplicity(a, w) * run_multiplicity(b, w));
      // the fresh initial state merges the two empty runs
      if (!w.empty()) CHECK(run_multiplicity(u, w) == run_multiplicity(a, w) + run_multiplicity(b, w));
    }
  }
}

TEST_CASE("trim keeps the language and run counts") {
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    FiniteAutomaton a = testing::random_nfa(rng, testing::ab(), 4);
    FiniteAutomaton t = trim(a);
    CHECK(t.state_count() <= a.state_count());
    CHECK(count_runs(a, 7) == count_runs(t, 7));
  }
}

TEST_CASE("count_runs sums multiplicities") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    FiniteAutomaton a = testing::random_nfa(rng, testing::ab(), 3);
    std::vector<Integer> expected(6, 0);
    for (const Word& w : testing::all_words(2, 5)) expected[w.size()] += run_multiplicity(a, w);
    CHECK(count_runs(a, 5) == expected);
  }
}

TEST_CASE("ambiguity search returns the first word with two runs") {
  CHECK_FALSE(find_ambiguous_word(fixtures::even_odd_ufa()).has_value());
  Rng rng(6);
  int ambiguous = 0;
  for (int i = 0; i < 80; ++i) {
    FiniteAutomaton a = testing::random_nfa(rng, testing::ab(), 3);
    std::optional<Word> brute;
    for (const Word& w : testing::all_words(2, 8))
      if (run_multiplicity(a, w) >= 2) {
        brute = w;
        break;
      }
    auto found = find_ambiguous_word(a);
    // Three states: an ambiguous word, if any, has length at most 9 + 1.
    if (brute) {
      ++ambiguous;
      REQUIRE(found.has_value());
      CHECK(*found == *brute);
    } else if (found) {
      CHECK(found->size() > 8);
      CHECK(run_multiplicity(a, *found) >= 2);
    }
  }
  CHECK(ambiguous > 10);
}
