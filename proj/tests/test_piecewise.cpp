#include <gtest/gtest.h>

#include <random>

#include "freenorm/error.hpp"
#include "freenorm/piecewise.hpp"

using namespace freenorm;

using PA = PiecewiseAffine;

namespace {

std::vector<Rational> probes(const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  for (int i = 0; i <= 400; ++i) out.push_back(lo + (hi - lo) * Rational(i, 400));
  for (int i = 1; i < 97; ++i) out.push_back(lo + (hi - lo) * Rational(i, 97));
  return out;
}

}  // namespace

TEST(Piecewise, MinOfAffinesSplitsAtNonDyadicCrossing) {
  // 96 r against r + 1/2 cross at r = 1/190.
  PA f = min(PA::affine(0, std::nullopt, 96, 0), PA::affine(0, std::nullopt, 1, Rational(1, 2)));
  ASSERT_EQ(f.knots().size(), 2u);
  EXPECT_EQ(f.knots()[1], Rational(1, 190));
  for (const Rational& r : probes(0, 1)) EXPECT_EQ(f(r), std::min<Rational>(96 * r, r + Rational(1, 2)));
  EXPECT_EQ(f(Rational(1000)), Rational(1000) + Rational(1, 2));
}

TEST(Piecewise, AlgebraAgreesPointwise) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-20, 20);
  auto random_pa = [&] {
    PA f = PA::affine(0, Rational(4), coef(rng), coef(rng));
    for (int i = 0; i < 3; ++i) f = (i % 2 ? max(f, PA::affine(0, Rational(4), coef(rng), coef(rng)))
                                           : min(f, PA::affine(0, Rational(4), coef(rng), coef(rng))));
    return f;
  };
  for (int trial = 0; trial < 200; ++trial) {
    PA f = random_pa(), g = random_pa();
    PA s = f + g, d = f - g, lo = min(f, g), hi = max(f, g), c = Rational(3, 7) * f + Rational(1, 3);
    for (const Rational& r : probes(0, 4)) {
      ASSERT_EQ(s(r), f(r) + g(r));
      ASSERT_EQ(d(r), f(r) - g(r));
      ASSERT_EQ(lo(r), std::min(f(r), g(r)));
      ASSERT_EQ(hi(r), std::max(f(r), g(r)));
      ASSERT_EQ(c(r), Rational(3, 7) * f(r) + Rational(1, 3));
    }
    auto neg = d.find_negative();
    bool any_negative = false;
    for (const Rational& r : probes(0, 4)) any_negative |= d(r) < 0;
    if (any_negative) ASSERT_TRUE(neg.has_value());
    if (neg) {
      ASSERT_LT(d(neg->r), 0);
      ASSERT_EQ(d(neg->r), neg->value);
    }
  }
}

TEST(Piecewise, JumpsAreExact) {
  PA left = PA::affine(0, Rational(1, 4), 8, 0);
  PA right = max(PA::constant(Rational(1, 4), std::nullopt, Rational(1, 8)), PA::affine(Rational(1, 4), std::nullopt, 1, 0));
  PA f = PA::join(left, right, 2);
  EXPECT_EQ(f(Rational(1, 4)), 2);
  EXPECT_EQ(f(Rational(1, 5)), Rational(8, 5));
  EXPECT_EQ(f(Rational(3, 10)), Rational(3, 10));
  // f - 1/4 is negative just right of the jump only at r < 1/4 where 8r < 1/4.
  auto w = (f + Rational(-1, 4)).find_negative();
  ASSERT_TRUE(w);
  EXPECT_LT(f(w->r), Rational(1, 4));
  EXPECT_THROW(f(Rational(-1)), Error);
}

TEST(Piecewise, StrictAndOpenEndpointQueries) {
  PA f = PA::affine(0, Rational(1), 1, 0);
  EXPECT_FALSE(f.find_negative());
  EXPECT_TRUE(f.find_nonpositive());
  EXPECT_FALSE(f.find_nonpositive(false));
  PA g = PA::affine(0, Rational(1), -1, Rational(1));  // zero only at the right end
  EXPECT_TRUE(g.find_nonpositive());
  EXPECT_EQ(g.find_nonpositive()->r, 1);
}
