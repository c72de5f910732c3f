#include <gtest/gtest.h>

#include "orthocoeff/enumerate.hpp"
#include "orthocoeff/maass.hpp"

using namespace orthocoeff;

namespace {

EvenLattice a1() { return EvenLattice(IntMatrix{{2}}); }
EvenLattice s8() { return EvenLattice(IntMatrix{{8}}); }
EvenLattice a2() { return EvenLattice(IntMatrix{{2, 1}, {1, 2}}); }

EvenLattice e8() {
  IntMatrix e(8, 8);
  for (int i = 0; i < 8; ++i) e(i, i) = 2;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}})
    e(a - 1, b - 1) = e(b - 1, a - 1) = -1;
  return EvenLattice(e);
}

// Arbitrary rational function of (Q_0, mu mod L).
Rational phi(const EvenLattice& lat, const Rational& q, const Vec& w) {
  DiscriminantGroup g(lat);
  i64 h = 7;
  for (i64 c : g.coordinates(w)) h = h * 31 + c;
  h = h * 131 + num(q).convert_to<i64>() * 17 + den(q).convert_to<i64>();
  return Rational(mod(h, 1009) - 500, 1 + mod(h, 7));
}

// Lift of phi: a(lambda) = sum over d | eps of d^(k-1) phi(Q_0 / d^2, w / d).
struct Lift {
  const EvenLattice& lat;
  int k;
  Rational operator()(const IndexVector& x) const {
    if (x.is_zero()) return 0;
    Rational s = 0;
    for (i64 d : divisors(x.eps())) {
      Vec w = x.w();
      for (i64& c : w) c /= d;
      s += rpow(Rational(d), k - 1) * phi(lat, x.q0() / (d * d), w);
    }
    return s;
  }
};

std::vector<IndexVector> nonzero_cone(const EvenLattice& lat, Rational bound) {
  std::vector<IndexVector> out;
  for (const auto& x : cone_vectors(lat, bound))
    if (!x.is_zero()) out.push_back(x);
  return out;
}

}  // namespace

TEST(Maass, SyntheticLiftHasZeroDefect) {
  for (const EvenLattice& lat : {a1(), s8(), a2()}) {
    Lift a{lat, 6};
    int imprimitive = 0;
    for (const auto& x : nonzero_cone(lat, Rational(6))) {
      EXPECT_EQ(maass_defect(lat, a, x, 6), 0) << x.str();
      if (x.eps() > 1) ++imprimitive;
    }
    EXPECT_GT(imprimitive, 0);
  }
}

TEST(Maass, PerturbationIsDetected) {
  EvenLattice lat = a1();
  Lift base{lat, 6};
  IndexVector target = index_vector(lat, 2, {2}, 2);
  auto perturbed = [&](const IndexVector& x) { return base(x) + (x == target ? Rational(1, 3) : Rational(0)); };
  EXPECT_EQ(maass_defect(lat, perturbed, target, 6), Rational(1, 3));
  // A perturbed value (lm, mu, 1) enters the defect of every (l, mu, m).
  IndexVector prim = index_vector(lat, 4, {0}, 1);
  auto shifted = [&](const IndexVector& x) { return base(x) + (x == prim ? Rational(5) : Rational(0)); };
  EXPECT_EQ(maass_defect(lat, shifted, index_vector(lat, 2, {0}, 2), 6), -5);
  EXPECT_EQ(maass_defect(lat, shifted, index_vector(lat, 1, {0}, 4), 6), -5);
  // Floating-point coefficients go through the same code.
  auto as_double = [&](const IndexVector& x) { return to_double(base(x)); };
  EXPECT_NEAR(maass_defect(lat, as_double, target, 6), 0, 1e-6);
  EXPECT_THROW(maass_defect(lat, base, index_vector(lat, 0, {0}, 0), 6), ValidationError);
  EXPECT_THROW(local_maass_defect(lat, base, index_vector(lat, 1, {0}, 3), 2, 6), ValidationError);
}

TEST(Maass, SiegelCase) {
  EvenLattice lat = a1();
  auto grid = nonzero_cone(lat, Rational(4));
  auto rep = verify_maass(lat, 6, grid);
  EXPECT_TRUE(rep.overall);
  for (const auto& e : rep.tested) {
    ASSERT_TRUE(e.global.exact.has_value());
    EXPECT_EQ(*e.global.exact, 0) << e.lambda.str();
    for (const auto& l : e.local) EXPECT_TRUE(l.defect.exact && *l.defect.exact == 0) << e.lambda.str() << " p=" << l.p;
  }
  EXPECT_TRUE(rep.per_prime.count(2));
  EXPECT_TRUE(rep.per_prime.at(2).asserted);
}

TEST(Maass, NonMaximalPrimeOnlyReported) {
  EvenLattice lat = s8();
  std::vector<IndexVector> grid;
  for (const auto& x : nonzero_cone(lat, Rational(3)))
    if (x.m() % 3 == 0 || x.m() % 2 == 0) grid.push_back(x);
  MaassOptions opt;
  opt.budget = 1000000;
  auto rep = verify_maass(lat, 6, grid, opt);
  ASSERT_TRUE(rep.per_prime.count(2));
  ASSERT_TRUE(rep.per_prime.count(3));
  EXPECT_FALSE(rep.per_prime.at(2).asserted);
  EXPECT_FALSE(rep.per_prime.at(2).maximal);
  EXPECT_TRUE(rep.per_prime.at(3).asserted);
  EXPECT_TRUE(rep.per_prime.at(3).ok);
  EXPECT_TRUE(rep.overall);
}

TEST(Maass, UnimodularImprimitive) {
  EvenLattice lat = e8();
  auto a = [&](const IndexVector& x) { return *coefficient(lat, x, 12).value_exact; };
  Vec zero(8, 0);
  Vec w = lat.gram().apply(Vec{2, 0, 0, 0, 0, 0, 0, 0});
  for (const auto& x : {index_vector(lat, 2, zero, 2), index_vector(lat, 2, w, 4), index_vector(lat, 3, zero, 3),
                        index_vector(lat, 2, zero, 4)}) {
    EXPECT_GT(x.eps(), 1);
    EXPECT_EQ(maass_defect(lat, a, x, 12), 0) << x.str();
    for (i64 p : prime_divisors(x.m())) EXPECT_EQ(local_maass_defect(lat, a, x, p, 12), 0) << x.str();
  }
}

TEST(Maass, GridOutsideConeRejected) {
  EvenLattice lat = a1();
  EXPECT_THROW(verify_maass(lat, 6, {index_vector(lat, 1, {4}, 1)}), ValidationError);
}
