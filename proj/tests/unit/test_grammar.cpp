#include <doctest.h>

#include "generators.hpp"
#include "ucfg/error.hpp"
#include "ucfg/fixtures.hpp"
#include "ucfg/grammar.hpp"
#include "ucfg/oracle.hpp"

using namespace ucfg;

namespace {

std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

// Random grammar whose productions are eps or a letter followed by up to
// three nonterminals.
Grammar random_prefixed(testing::Rng& rng) {
  Grammar g(testing::ab(), "S");
  int k = rng.uniform(1, 3);
  for (int i = 1; i < k; ++i) g.add_nonterminal("N" + std::to_string(i));
  for (int x = 0; x < k; ++x) {
    if (rng.coin(0.6)) g.add_production(x, {});
    int rules = rng.uniform(1, 3);
    for (int r = 0; r < rules; ++r) {
      std::vector<Symbol> rhs{Symbol::letter(rng.uniform(0, 1))};
      int tail = rng.uniform(0, 3);
      for (int t = 0; t < tail; ++t) rhs.push_back(Symbol::nonterminal(rng.uniform(0, k - 1)));
      if (!g.has_production(x, rhs)) g.add_production(x, rhs);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("grammar text round-trips") {
  for (const auto& f : fixtures::all_grammars()) {
    CAPTURE(f.name);
    const Grammar& g = f.grammar.grammar();
    Grammar back = parse_grammar(serialize(g));
    CHECK(back == g);
  }
}

TEST_CASE("grammar parsing") {
  Grammar g = parse_grammar(
      "# comment\n"
      "alphabet a b\n"
      "start S\n"
      "S -> a S T   # trailing comment\n"
      "S ->\n"
      "T -> b\n");
  CHECK(g.nonterminal_count() == 2);
  CHECK(g.nonterminal_name(0) == "S");
  CHECK(g.productions().size() == 3);
  CHECK(g.productions()[1].rhs.empty());

  CHECK(code_of([] { parse_grammar("start S\nS ->\n"); }) == "lang.parse");
  CHECK(code_of([] { parse_grammar("alphabet a\nS ->\n"); }) == "lang.parse");
  CHECK(code_of([] { parse_grammar("alphabet a\nstart a\n"); }) == "lang.validation");
  CHECK(code_of([] { parse_grammar("alphabet a\nstart S\nS -> a\nS -> a\n"); }) == "lang.validation");
}

TEST_CASE("the nonterminals line fixes the order") {
  Grammar g = parse_grammar("alphabet a\nstart S\nnonterminals S E T\nT -> a\nS -> a T E\nE ->\n");
  CHECK(g.nonterminal_name(1) == "E");
  CHECK(g.nonterminal_name(2) == "T");
}

TEST_CASE("short GNF validation lists offending productions") {
  Grammar g = parse_grammar("alphabet a\nstart S\nS -> a\nS -> a S\nS -> S S\nS ->\n");
  try {
    validate_short_gnf(g);
    FAIL("accepted");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(e.code() == "lang.validation");
    CHECK(msg.find("S -> a S") != std::string::npos);
    CHECK(msg.find("S -> S S") != std::string::npos);
  }
  ShortGnfGrammar ok = fixtures::dyck_grammar();
  CHECK(ok.rules().size() == 2);
  CHECK(ok.has_epsilon(ok.start()));
  CHECK(ok.rules_of(0).size() == 1);
}

TEST_CASE("binarize_prefixed keeps derivation counts") {
  testing::Rng rng(2024);
  for (int iter = 0; iter < 60; ++iter) {
    Grammar g = random_prefixed(rng);
    ShortGnfGrammar b = binarize_prefixed(g);
    CAPTURE(serialize(g));
    for (const Word& w : testing::all_words(2, 6)) CHECK(count_derivations(g, w) == count_derivations(b.grammar(), w));
  }
}

TEST_CASE("binarize_prefixed leaves short GNF input alone") {
  ShortGnfGrammar d = fixtures::dyck_grammar();
  CHECK(binarize_prefixed(d.grammar()) == d);
}

TEST_CASE("binarize_prefixed rejects other shapes") {
  Grammar g = parse_grammar("alphabet a\nstart S\nS -> S a\n");
  CHECK(code_of([&] { binarize_prefixed(g); }) == "lang.validation");
}

TEST_CASE("trim removes useless nonterminals and keeps counts") {
  Grammar g = parse_grammar(
      "alphabet a b\nstart S\n"
      "S -> a E S\nS ->\nE ->\n"
      "U -> b U E\n"      // unproductive
      "V -> b E E\n");    // unreachable
  ShortGnfGrammar t = trim(validate_short_gnf(g));
  CHECK(t.nonterminal_count() == 2);
  for (const Word& w : testing::all_words(2, 6)) CHECK(count_derivations(g, w) == count_derivations(t.grammar(), w));

  Grammar empty = parse_grammar("alphabet a\nstart S\nS -> a S S\n");
  ShortGnfGrammar te = trim(validate_short_gnf(empty));
  CHECK(te.nonterminal_count() == 1);
  CHECK(te.rules().empty());
}

TEST_CASE("GnfBuilder helpers") {
  GnfBuilder b(testing::ab(), "S");
  int s = b.nonterminal("S");
  int e = b.fresh("E");
  b.epsilon_once(e);
  b.epsilon_once(e);
  b.rule_once(s, 0, e, e);
  b.rule_once(s, 0, e, e);
  ShortGnfGrammar g = b.build();
  CHECK(g.rules().size() == 1);
  CHECK(g.has_epsilon(e));
  CHECK(b.grammar().fresh_name("E") == "E'");
}
