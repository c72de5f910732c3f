#include <gtest/gtest.h>

#include "orthocoeff/arith.hpp"

using namespace orthocoeff;

namespace {

// Akiyama-Tanigawa; yields B_1 = +1/2.
Rational bernoulli_at(int k) {
  std::vector<Rational> a(k + 1);
  for (int m = 0; m <= k; ++m) {
    a[m] = Rational(1, m + 1);
    for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
  }
  return a[0];
}

// Euler's criterion for an odd prime p.
int legendre_euler(i64 d, i64 p) {
  i64 r = 1, b = mod(d, p);
  for (i64 e = (p - 1) / 2; e; e >>= 1, b = mulmod(b, b, p))
    if (e & 1) r = mulmod(r, b, p);
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

bool squarefree(i64 n) {
  for (auto [p, e] : factorize(n < 0 ? -n : n))
    if (e > 1) return false;
  return true;
}

bool is_fundamental(i64 d) {
  if (d == 1) return true;
  if (mod(d, 4) == 1) return squarefree(d);
  if (mod(d, 4) != 0) return false;
  i64 s = d / 4;
  return (mod(s, 4) == 2 || mod(s, 4) == 3) && squarefree(s);
}

}  // namespace

TEST(Arith, BernoulliNumbers) {
  EXPECT_EQ(bernoulli(0), 1);
  EXPECT_EQ(bernoulli(1), Rational(-1, 2));
  EXPECT_EQ(bernoulli(4), Rational(-1, 30));
  EXPECT_EQ(bernoulli(12), Rational(-691, 2730));
  for (int k = 2; k <= 40; ++k) EXPECT_EQ(bernoulli(k), bernoulli_at(k)) << k;
}

TEST(Arith, KroneckerAgainstEulerCriterion) {
  for (i64 d = -60; d <= 60; ++d) {
    if (d == 0) continue;
    for (i64 p : {3, 5, 7, 11, 13, 17, 19, 23}) EXPECT_EQ(kronecker(d, p), legendre_euler(d, p)) << d << " " << p;
  }
  EXPECT_EQ(kronecker(1, 17), 1);
  EXPECT_EQ(kronecker(-4, 3), -1);
  EXPECT_EQ(kronecker(8, 2), 0);
}

TEST(Arith, KroneckerIsACharacterForFundamentalD) {
  for (i64 d = -50; d <= 50; ++d) {
    if (d == 0 || !is_fundamental(d)) continue;
    i64 f = d < 0 ? -d : d;
    for (i64 m = 1; m <= 60; ++m) {
      EXPECT_EQ(kronecker(d, m), kronecker(d, m + f)) << d << " " << m;
      for (i64 m2 = 1; m2 <= 12; ++m2) EXPECT_EQ(kronecker(d, m * m2), kronecker(d, m) * kronecker(d, m2));
      EXPECT_EQ(kronecker(d, m) == 0, std::gcd(d, m) > 1);
    }
  }
}

TEST(Arith, FundamentalDiscriminant) {
  auto a = fundamental_discriminant(1);
  EXPECT_EQ(a.fund, 1);
  EXPECT_EQ(a.f0, 1);
  auto b = fundamental_discriminant(12);
  EXPECT_EQ(b.fund, 12);
  EXPECT_EQ(b.f0, 1);
  auto c = fundamental_discriminant(16);
  EXPECT_EQ(c.fund, 1);
  EXPECT_EQ(c.f0, 4);
  EXPECT_THROW(fundamental_discriminant(6), ValidationError);
  for (i64 d = -200; d <= 200; ++d) {
    if (d == 0 || (mod(d, 4) != 0 && mod(d, 4) != 1)) continue;
    auto r = fundamental_discriminant(d);
    EXPECT_EQ(r.f0 * r.f0 * r.fund, d);
    EXPECT_TRUE(is_fundamental(r.fund)) << d;
  }
}

TEST(Arith, GeneralizedBernoulli) {
  EXPECT_EQ(generalized_bernoulli(1, KroneckerChar(-4)), Rational(-1, 2));
  EXPECT_EQ(generalized_bernoulli(2, KroneckerChar(5)), Rational(4, 5));
  EXPECT_EQ(generalized_bernoulli(5, KroneckerChar(-3)), Rational(-10, 3));
  EXPECT_EQ(generalized_bernoulli(6, KroneckerChar(1)), bernoulli(6));
  // B_{1,chi} = (1/f) sum a chi(a) for odd primitive chi.
  for (i64 d : {-3, -4, -7, -8, -11, -15, -19, -20, -23, -24}) {
    Rational s = 0;
    for (i64 a = 1; a <= -d; ++a) s += Rational(a * kronecker(d, a));
    EXPECT_EQ(generalized_bernoulli(1, KroneckerChar(d)), s / Rational(-d)) << d;
  }
}

TEST(Arith, MultiplicativeFunctions) {
  for (i64 n = 1; n <= 300; ++n) {
    i64 phi = 0;
    for (i64 a = 1; a <= n; ++a)
      if (std::gcd(a, n) == 1) ++phi;
    EXPECT_EQ(euler_phi(n), phi);
    Rational s3 = 0, s7 = 0;
    int mob_sum = 0;
    for (i64 d = 1; d <= n; ++d)
      if (n % d == 0) {
        s3 += Rational(ipow(BigInt(d), 3));
        s7 += Rational(ipow(BigInt(d), 7));
        mob_sum += mobius(d);
      }
    EXPECT_EQ(sigma(3, n), s3);
    EXPECT_EQ(sigma(7, n), s7);
    EXPECT_EQ(mob_sum, n == 1 ? 1 : 0);
  }
}

TEST(Arith, TwistedDivisorSum) {
  KroneckerChar chi(-4);
  for (i64 n = 1; n <= 100; ++n) {
    Rational s = 0;
    for (i64 d = 1; d <= n; ++d)
      if (n % d == 0) s += Rational(chi.primitive(d)) * rpow(Rational(d), 2);
    EXPECT_EQ(sigma_chi(2, chi, n), s);
  }
}
