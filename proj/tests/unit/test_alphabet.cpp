#include <doctest.h>

#include "generators.hpp"
#include "ucfg/alphabet.hpp"
#include "ucfg/error.hpp"

using namespace ucfg;

TEST_CASE("letters are indexed in order") {
  Alphabet a({"x", "y", "z"});
  CHECK(a.size() == 3);
  CHECK(a.index("y") == 1);
  CHECK_FALSE(a.find("w").has_value());
  CHECK_THROWS_AS(a.index("w"), Error);
  CHECK(Alphabet::indexed(3).letters() == std::vector<std::string>{"a1", "a2", "a3"});
}

TEST_CASE("invalid alphabets are rejected") {
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), Error);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
  CHECK_THROWS_AS(Alphabet({"a b"}), Error);
}

TEST_CASE("rendering concatenates one-character letters and spaces longer ones") {
  Alphabet ab({"a", "b"});
  CHECK(ab.render({0, 1, 1}) == "abb");
  CHECK(ab.render({}) == "");
  Alphabet idx = Alphabet::indexed(3);
  CHECK(idx.render({2, 0}) == "a3 a1");
  CHECK(idx.parse_word("a3 a1") == Word{2, 0});
  CHECK(ab.parse_word("a b b") == Word{0, 1, 1});
}

TEST_CASE("render and parse_word are inverse") {
  testing::Rng rng(5);
  for (const Alphabet& a : {Alphabet({"a", "b", "c"}), Alphabet::indexed(4)}) {
    for (int i = 0; i < 100; ++i) {
      Word w(rng.uniform(0, 6));
      for (auto& x : w) x = rng.uniform(0, a.size() - 1);
      CHECK(a.parse_word(a.render(w)) == w);
    }
  }
}

TEST_CASE("next_word walks one length in lexicographic order") {
  Word w{0, 0};
  int count = 1;
  Word prev = w;
  while (next_word(w, 3)) {
    CHECK(prev < w);
    prev = w;
    ++count;
  }
  CHECK(count == 9);
  CHECK(w == Word{0, 0});
  CHECK(shortlex_less({1}, {0, 0}));
  CHECK(shortlex_less({0, 1}, {1, 0}));
  CHECK_FALSE(shortlex_less({1, 0}, {1, 0}));
}
