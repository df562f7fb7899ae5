#include <gtest/gtest.h>

#include <random>

#include "freenorm/error.hpp"
#include "freenorm/words.hpp"

using namespace freenorm;

namespace {

Letter L(std::string_view s) { return Letter::parse(s); }
Word W(std::string_view s) { return Word::parse(s); }

// Cancels adjacent inverse pairs until nothing changes: slow and obviously right.
Word naive_reduce(const Word& w) {
  std::vector<Letter> v;
  for (const Letter& a : w.letters())
    if (!a.is_identity()) v.push_back(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i].inverse() == v[i + 1]) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return v.empty() ? Word::identity() : Word(v);
}

Word random_word(std::mt19937_64& rng, std::size_t len) {
  const char* pool[] = {"e", "x:", "X:", "x:1", "X:1", "x:0,1", "X:0,1"};
  std::uniform_int_distribution<int> pick(0, 6);
  std::vector<Letter> v;
  for (std::size_t i = 0; i < len; ++i) v.push_back(L(pool[pick(rng)]));
  return Word(v);
}

}  // namespace

TEST(Point, CanonicalStorageDropsTrailingZeros) {
  EXPECT_EQ(Point({1, 0, 0}), Point({1}));
  EXPECT_EQ(Point({0, 0}), Point());
  EXPECT_EQ(Point({1, 0, 2}).support(), 3u);
  EXPECT_EQ(Point({1, 0, 2})[7], 0u);
  EXPECT_EQ(project(Point({1, 0, 2}), 2), Point({1}));
  EXPECT_EQ(Point::parse("1,0,2").to_string(), "1,0,2");
  EXPECT_TRUE(Point::parse("").is_zero());
  EXPECT_THROW(Point::parse("1,,2"), Error);
}

TEST(Letter, TextAndInverse) {
  EXPECT_EQ(L("x:1,0,2").to_string(), "x:1,0,2");
  EXPECT_EQ(L("x:1").inverse(), L("X:1"));
  EXPECT_EQ(L("e").inverse(), L("e"));
  EXPECT_EQ(L("x:").point(), Point());
  EXPECT_THROW(L("y:1"), Error);
}

TEST(Ultrametric, Values) {
  EXPECT_EQ(ultrametric_d(L("x:1"), L("x:1")), Dyadic(0));
  EXPECT_EQ(ultrametric_d(L("x:1"), L("x:2")), Dyadic(1));
  EXPECT_EQ(ultrametric_d(L("x:1,0"), L("x:1,3")), Dyadic::pow2(-1));
  EXPECT_EQ(ultrametric_d(L("x:1,0,5"), L("x:1,0,4")), Dyadic::pow2(-2));
  EXPECT_EQ(ultrametric_d(L("x:1"), L("X:1")), Dyadic(1));
  EXPECT_EQ(ultrametric_d(L("e"), L("x:")), Dyadic(1));
  EXPECT_EQ(ultrametric_d(L("e"), L("e")), Dyadic(0));
}

TEST(Ultrametric, StrongTriangleOnSmallPool) {
  std::vector<Letter> pool{L("e")};
  for (auto s : {"", "1", "2", "0,1", "1,1", "1,0,1", "1,1,1"}) {
    pool.push_back(Letter::pos(Point::parse(s)));
    pool.push_back(Letter::neg(Point::parse(s)));
  }
  for (auto& a : pool)
    for (auto& b : pool) {
      EXPECT_EQ(ultrametric_d(a, b), ultrametric_d(b, a));
      EXPECT_EQ(ultrametric_d(a, b), ultrametric_d(a.inverse(), b.inverse()));
      for (auto& c : pool) EXPECT_LE(ultrametric_d(a, c), std::max(ultrametric_d(a, b), ultrametric_d(b, c)));
    }
}

TEST(Word, ParseAndPrint) {
  Word w = W("x:1  X:0,1 e");
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.to_string(), "x:1 X:0,1 e");
  EXPECT_THROW(W(""), Error);
  EXPECT_THROW(Word(std::vector<Letter>{}), Error);
  try {
    W("x:1 q:2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(Word, Reduction) {
  EXPECT_EQ(reduce(W("x:1 X:1")), Word::identity());
  EXPECT_EQ(reduce(W("e x:1 e X:2 x:2 e")), W("x:1"));
  EXPECT_EQ(reduce(W("x:1 x:2 X:2 X:1 x:3")), W("x:3"));
  EXPECT_TRUE(W("x:1 x:1").is_irreducible());
  EXPECT_FALSE(W("x:1 e").is_irreducible());
  EXPECT_TRUE(Word::identity().is_irreducible());
}

TEST(Word, GroupLawsOnRandomWords) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 9);
  for (int i = 0; i < 500; ++i) {
    Word a = random_word(rng, len(rng)), b = random_word(rng, len(rng)), c = random_word(rng, len(rng));
    EXPECT_EQ(reduce(a), naive_reduce(a));
    EXPECT_TRUE(reduce(a).is_irreducible());
    EXPECT_EQ(group_multiply(group_multiply(a, b), c), group_multiply(a, group_multiply(b, c)));
    EXPECT_EQ(group_multiply(a, invert(a)), Word::identity());
    EXPECT_EQ(group_multiply(Word::identity(), a), reduce(a));
    EXPECT_EQ(invert(invert(a)), a);
  }
}
