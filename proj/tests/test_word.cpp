#include <doctest.h>

#include "freehardy/error.hpp"
#include "freehardy/word.hpp"

using namespace freehardy;

namespace {
Word w(int d, std::vector<int> l) { return Word(d, std::move(l)); }
}  // namespace

TEST_CASE("concat follows the letters of both words") {
  CHECK(concat(w(3, {1, 2}), w(3, {3})) == w(3, {1, 2, 3}));
  CHECK(concat(w(2, {1, 2}), Word::unit(2)) == w(2, {1, 2}));
  CHECK(concat(Word::unit(2), Word::unit(2)).empty());
  CHECK_THROWS_AS(concat(w(2, {1}), w(3, {1})), Error);
}

TEST_CASE("letters outside the alphabet are rejected") {
  CHECK_THROWS_AS(w(2, {3}), Error);
  CHECK_THROWS_AS(w(2, {0}), Error);
}

TEST_CASE("dagger reverses") {
  CHECK(dagger(w(2, {1, 2})) == w(2, {2, 1}));
  CHECK(dagger(Word::unit(2)).empty());
  CHECK(dagger(w(3, {1, 2, 3})) == w(3, {3, 2, 1}));
}

TEST_CASE("dagger is an involutive anti-homomorphism on short words") {
  for (int d = 1; d <= 3; ++d) {
    const auto words = enumerate(d, 4);
    for (const Word& a : words) {
      CHECK(dagger(dagger(a)) == a);
      for (const Word& b : words) {
        REQUIRE(dagger(concat(a, b)) == concat(dagger(b), dagger(a)));
      }
    }
  }
}

TEST_CASE("left quotient strips prefixes") {
  CHECK(*left_quotient(w(2, {1, 2}), w(2, {1, 2, 1})) == w(2, {1}));
  CHECK(left_quotient(w(2, {1, 2}), w(2, {1, 2}))->empty());
  CHECK_FALSE(left_quotient(w(2, {2}), w(2, {1, 2})).has_value());
  const auto words = enumerate(2, 4);
  for (const Word& a : words)
    for (const Word& g : words) REQUIRE(*left_quotient(a, concat(a, g)) == g);
}

TEST_CASE("right quotient strips suffixes") {
  CHECK(*right_quotient(w(2, {2, 1}), w(2, {1, 2, 1})) == w(2, {1}));
  CHECK_FALSE(right_quotient(w(2, {1}), w(2, {1, 2})).has_value());
}

TEST_CASE("enumerate is graded lexicographic") {
  auto e = enumerate(2, 1);
  REQUIRE(e.size() == 3);
  CHECK(e[0].empty());
  CHECK(e[1] == w(2, {1}));
  CHECK(e[2] == w(2, {2}));

  e = enumerate(2, 2);
  REQUIRE(e.size() == 7);
  CHECK(e[5] == w(2, {2, 1}));
  CHECK(e[6] == w(2, {2, 2}));

  e = enumerate(1, 3);
  REQUIRE(e.size() == 4);
  CHECK(e[3] == w(1, {1, 1, 1}));

  CHECK(word_count(3, 3) == 40);
  for (int d = 1; d <= 3; ++d) {
    const auto words = enumerate(d, 4);
    for (std::size_t i = 0; i < words.size(); ++i) {
      REQUIRE(word_index(words[i]) == i);
      REQUIRE(word_at(d, i) == words[i]);
      if (i > 0) REQUIRE(words[i - 1] < words[i]);
    }
  }
}

TEST_CASE("the basis cap raises a capacity error") {
  try {
    (void)word_count(2, 30);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
}

TEST_CASE("words serialize as integer arrays") {
  CHECK(to_json(w(2, {1, 2, 1})).dump() == "[1,2,1]");
  CHECK(to_json(Word::unit(2)).dump() == "[]");
  CHECK(word_from_json(nlohmann::json::parse("[2,1]"), 2) == w(2, {2, 1}));
  CHECK_THROWS_AS(word_from_json(nlohmann::json::parse("[3]"), 2), Error);
}
