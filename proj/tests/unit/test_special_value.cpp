#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orthocoeff/special_value.hpp"

using namespace orthocoeff;

namespace {

double zeta_numeric(int k) {
  double s = 0;
  for (int n = 200000; n >= 1; --n) s += std::pow(n, -k);
  return s;
}

// Partial sum with the alternating-tail average for conditionally convergent cases.
double l_numeric(int m, i64 d) {
  i64 f = d < 0 ? -d : d;
  double s = 0, prev = 0;
  i64 top = f * 400000;
  for (i64 n = 1; n <= top; ++n) {
    prev = s;
    s += kronecker(d, n) * std::pow(static_cast<double>(n), -m);
  }
  return m == 1 ? (s + prev) / 2 : s;
}

}  // namespace

TEST(SpecialValue, Canonicalization) {
  SpecialValue v(Rational(1), 0, 12);  // sqrt(12) = 2 sqrt(3)
  EXPECT_EQ(v.q(), 2);
  EXPECT_EQ(v.R(), 3);
  SpecialValue w = SpecialValue::sqrt_of(Rational(3, 4));  // sqrt(3)/2
  EXPECT_EQ(w.q(), Rational(1, 2));
  EXPECT_EQ(w.R(), 3);
  SpecialValue x = v * w;  // 3
  EXPECT_TRUE(x.is_rational());
  EXPECT_EQ(x.to_rational(), 3);
  EXPECT_THROW(v.to_rational(), AssertionFailure);
  EXPECT_TRUE((v / v).is_rational());
  EXPECT_EQ((SpecialValue::pi_power(4) / SpecialValue::pi_power(4)).to_rational(), 1);
}

TEST(SpecialValue, ZetaValues) {
  SpecialValue z2 = zeta_special(2);
  EXPECT_EQ(z2.q(), Rational(1, 6));
  EXPECT_EQ(z2.e(), 4);
  EXPECT_EQ(z2.R(), 1);
  EXPECT_NEAR(z2.to_double(), std::numbers::pi * std::numbers::pi / 6, 1e-15);
  for (int k = 4; k <= 16; k += 2) EXPECT_NEAR(zeta_special(k).to_double(), zeta_numeric(k), 1e-9) << k;
  EXPECT_THROW(zeta_special(3), ValidationError);
}

TEST(SpecialValue, GammaValues) {
  EXPECT_EQ(gamma_special(10).to_rational(), 24);
  for (int t = 1; t <= 15; ++t) EXPECT_NEAR(gamma_special(t).to_double(), std::tgamma(t / 2.0), 1e-9 * std::tgamma(t / 2.0));
}

TEST(SpecialValue, DirichletLValues) {
  SpecialValue l1 = l_special(1, KroneckerChar(-4));  // pi/4
  EXPECT_EQ(l1.q(), Rational(1, 4));
  EXPECT_EQ(l1.e(), 2);
  EXPECT_EQ(l1.R(), 1);
  SpecialValue l2 = l_special(2, KroneckerChar(5));  // 4 pi^2 / (25 sqrt 5)
  EXPECT_EQ(l2.q(), Rational(4, 125));
  EXPECT_EQ(l2.e(), 4);
  EXPECT_EQ(l2.R(), 5);
  for (auto [m, d] : std::vector<std::pair<int, i64>>{{1, -3}, {3, -4}, {2, 8}, {2, 12}, {3, -7}, {2, 13}, {4, 5}})
    EXPECT_NEAR(l_special(m, KroneckerChar(d)).to_double(), l_numeric(m, d), 1e-6) << m << " " << d;
  // Imprimitive D: Euler factors at primes of D not dividing the conductor.
  double imprim = l_numeric(2, 20);
  EXPECT_NEAR(l_special(2, KroneckerChar(20)).to_double(), imprim, 1e-6);
  EXPECT_THROW(l_special(2, KroneckerChar(-4)), ValidationError);
}
