#include <doctest.h>

#include "generators.hpp"
#include "ucfg/error.hpp"
#include "ucfg/fixtures.hpp"
#include "ucfg/oracle.hpp"

using namespace ucfg;

TEST_CASE("enumeration of the fixtures") {
  auto dyck = enumerate_words(fixtures::dyck_grammar().grammar(), 6);
  std::vector<std::size_t> sizes;
  for (const auto& level : dyck) sizes.push_back(level.size());
  CHECK(sizes == std::vector<std::size_t>{1, 0, 1, 0, 2, 0, 5});
  CHECK(dyck[4][0] == Word{0, 0, 1, 1});  // aabb before abab

  auto y2 = enumerate_words(fixtures::y2_grammar().grammar(), 6);
  CHECK(word_counts(y2).counts == std::vector<Integer>{1, 1, 1, 1, 0, 0, 0});
  CHECK_FALSE(word_counts(y2).multiplicity);
}

TEST_CASE("recognizer and derivation counts") {
  Grammar amb = fixtures::ambiguous_grammar().grammar();
  CHECK(recognizes(amb, {0}));
  CHECK(count_derivations(amb, {0}) == 2);
  CHECK(count_derivations(amb, {}) == 0);
  Grammar dyck = fixtures::dyck_grammar().grammar();
  CHECK(recognizes(dyck, {0, 1, 0, 0, 1, 1}));
  CHECK_FALSE(recognizes(dyck, {0, 1, 1, 0}));
}

TEST_CASE("general grammars, including unit and epsilon rules") {
  Grammar g = parse_grammar("alphabet a b\nstart S\nS -> S S\nS -> a\nS ->\n");
  CHECK(recognizes(g, {0, 0}));
  CHECK_FALSE(recognizes(g, {1}));
  CHECK_THROWS_AS(count_derivations(g, {0}), Error);  // S -> S S with S -> eps pumps

  Grammar h = parse_grammar("alphabet a b\nstart S\nS -> T\nT -> a b\nS -> a U\nU -> b\n");
  CHECK(count_derivations(h, {0, 1}) == 2);
}

TEST_CASE("lint finds the shortest ambiguous word") {
  auto v = check_unambiguous_up_to(fixtures::ambiguous_grammar(), 4);
  CHECK(v.ambiguous);
  CHECK(v.witness == Word{0});
  for (const auto& f : fixtures::all_grammars()) {
    CAPTURE(f.name);
    CHECK(check_unambiguous_up_to(f.grammar, 7).ambiguous == !f.unambiguous);
    CHECK(check_unambiguous_up_to(f.grammar.grammar(), 6).ambiguous == !f.unambiguous);
  }
}

TEST_CASE("the two lints agree on random grammars") {
  testing::Rng rng(31);
  for (int iter = 0; iter < 40; ++iter) {
    Grammar g(testing::ab(), "S");
    int k = rng.uniform(1, 3);
    for (int i = 1; i < k; ++i) g.add_nonterminal("N" + std::to_string(i));
    for (int x = 0; x < k; ++x) {
      if (rng.coin(0.6)) g.add_production(x, {});
      for (int r = rng.uniform(1, 3); r > 0; --r) {
        std::vector<Symbol> rhs{Symbol::letter(rng.uniform(0, 1)), Symbol::nonterminal(rng.uniform(0, k - 1)),
                                Symbol::nonterminal(rng.uniform(0, k - 1))};
        if (!g.has_production(x, rhs)) g.add_production(x, rhs);
      }
    }
    ShortGnfGrammar sg = validate_short_gnf(g);
    auto a = check_unambiguous_up_to(g, 6), b = check_unambiguous_up_to(sg, 6);
    CHECK(a.ambiguous == b.ambiguous);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("regex enumeration uses set semantics") {
  Alphabet ab = testing::ab();
  Regex e = parse_regex("(a | a)*", ab);
  auto w = enumerate_words(e, 3);
  CHECK(word_counts(w).counts == std::vector<Integer>{1, 1, 1, 1});
}

TEST_CASE("budgets stop runaway enumeration") {
  try {
    enumerate_words(fixtures::universal_grammar().grammar(), 20, 1000);
    FAIL("no budget error");
  } catch (const Error& e) {
    CHECK(e.code() == "lang.budget");
  }
  CHECK(words_up_to(2, 3) == 15);
}
