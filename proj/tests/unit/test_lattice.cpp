#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "orthocoeff/enumerate.hpp"
#include "orthocoeff/lattice.hpp"

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

// Random even positive-definite Gram of rank <= 3 with small determinant.
std::optional<EvenLattice> random_gram(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_dist(1, 3), diag(1, 4), off(-2, 2);
  std::size_t n = static_cast<std::size_t>(n_dist(rng));
  IntMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = 2 * diag(rng);
    for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i) = off(rng);
  }
  if (find_gram_defect(s)) return std::nullopt;
  return EvenLattice(s);
}

// Brute-force Q-values of the discriminant group: mu = S^-1 w over w mod S Z^n.
std::set<Rational> brute_q_values(const EvenLattice& lat, i64 p, bool& has_isotropic) {
  std::size_t n = lat.rank();
  i64 det = lat.det();
  std::set<Rational> out;
  has_isotropic = false;
  Vec w(n, 0);
  std::set<Vec> seen;
  while (true) {
    // coset key: S^-1 w mod 1
    Vec a = lat.adjugate().apply(w);
    Vec key;
    for (i64 c : a) key.push_back(mod(c, det));
    if (seen.insert(key).second) {
      Rational q = lat.q_of_w(w);
      Rational frac = q - Rational(num(q) / den(q));
      if (frac < 0) frac += 1;
      out.insert(frac);
      // order of the coset
      i64 ord = 1;
      while (true) {
        bool integral = true;
        for (i64 c : key)
          if (mod(c * ord, det)) integral = false;
        if (integral) break;
        ++ord;
      }
      if (ord > 1 && ord % p == 0 && frac == 0) has_isotropic = true;
    }
    std::size_t k = n;
    while (k > 0 && ++w[k - 1] == det) w[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

}  // namespace

TEST(Lattice, ExtendLayout) {
  ExtendedGram ext = extend(a1());
  EXPECT_EQ(ext.s0, (IntMatrix{{0, 0, 1}, {0, -2, 0}, {1, 0, 0}}));
  EXPECT_EQ(ext.s1.rows(), 5u);
  EXPECT_EQ(ext.s1(0, 4), 1);
  EXPECT_EQ(ext.s1(2, 2), -2);
  EXPECT_EQ(ext.s1(1, 3), 1);
  ExtendedGram e2 = extend(a2());
  EXPECT_EQ(e2.s0(1, 1), -2);
  EXPECT_EQ(e2.s0(1, 2), -1);
}

TEST(Lattice, QuadraticForms) {
  EvenLattice lat = a1();
  ExtendedGram ext = extend(lat);
  RatVec v{1, 0, 1};
  EXPECT_EQ(q0(ext, v), 1);
  RatVec half{1, Rational(1, 2), 1};
  EXPECT_EQ(q0(ext, half), Rational(3, 4));
  RatVec g{-1, 1, 0, 1, 1};
  EXPECT_EQ(q1(ext, g), 0);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-9, 9);
  for (const EvenLattice& L : {a1(), a2(), e8()}) {
    ExtendedGram x = extend(L);
    for (int trial = 0; trial < 100; ++trial) {
      RatVec full, inner;
      for (std::size_t i = 0; i < L.rank() + 4; ++i) full.push_back(d(rng));
      inner.assign(full.begin() + 1, full.end() - 1);
      EXPECT_EQ(q1(x, full), full.front() * full.back() + q0(x, inner));
    }
  }
}

TEST(Lattice, IndexVectorInvariants) {
  EvenLattice lat = a1();
  auto x = index_vector(lat, 1, {0}, 1);
  EXPECT_EQ(x.eps(), 1);
  EXPECT_EQ(x.q0(), 1);
  EXPECT_EQ(x.level(), 1);
  auto y = index_vector(lat, 2, {2}, 2);
  EXPECT_EQ(y.eps(), 2);
  EXPECT_EQ(y.q0(), 3);
  EXPECT_EQ(y.level(), 1);
  auto z = index_vector(lat, 1, {1}, 1);
  EXPECT_EQ(z.q0(), Rational(3, 4));
  EXPECT_EQ(z.eps(), 1);
  EXPECT_EQ(z.level(), 2);
}

TEST(Lattice, DiscriminantGroups) {
  DiscriminantGroup g1(a1());
  EXPECT_EQ(g1.order(), 2);
  EXPECT_EQ(g1.q_mod_1(g1.generators()[0]), Rational(1, 4));
  DiscriminantGroup g8(s8());
  EXPECT_EQ(g8.order(), 8);
  EXPECT_EQ(g8.q_mod_1(Vec{4}), 0);
  EXPECT_EQ(g8.element_order(Vec{4}), 2);
  EXPECT_EQ(DiscriminantGroup(e8()).order(), 1);
  // Q mod 1 is well defined: shifting w by S v leaves it unchanged.
  EvenLattice lat(IntMatrix{{4, 1}, {1, 6}});
  DiscriminantGroup g(lat);
  EXPECT_EQ(g.order(), lat.det());
  for (const Vec& gen : g.generators()) {
    Vec shifted = gen;
    Vec sv = lat.gram().apply(Vec{3, -2});
    for (std::size_t i = 0; i < 2; ++i) shifted[i] += sv[i];
    EXPECT_EQ(g.q_mod_1(gen), g.q_mod_1(shifted));
    EXPECT_EQ(g.coordinates(gen), g.coordinates(shifted));
  }
}

TEST(Lattice, MaximalityExamples) {
  EXPECT_TRUE(is_maximal_at(a1(), 2));
  EXPECT_TRUE(is_maximal(a1()));
  EXPECT_FALSE(is_maximal_at(s8(), 2));
  EXPECT_FALSE(is_maximal(s8()));
  auto w = maximality_witness(s8(), 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->order, 2);
  EXPECT_TRUE(is_integer(w->q));
  EXPECT_TRUE(is_maximal(e8()));
  EXPECT_TRUE(is_maximal(a2()));
}

TEST(Lattice, MaximalityAgainstBruteForce) {
  std::mt19937 rng(2024);
  int tested = 0;
  while (tested < 40) {
    auto lat = random_gram(rng);
    if (!lat || lat->det() > 60) continue;
    ++tested;
    for (i64 p : {2, 3, 5, 7}) {
      bool iso = false;
      brute_q_values(*lat, p, iso);
      EXPECT_EQ(is_maximal_at(*lat, p), !iso) << lat->gram() << " p=" << p;
      if (lat->det() % p) EXPECT_TRUE(is_maximal_at(*lat, p));
    }
  }
}

TEST(Lattice, NormalizeAtP) {
  EvenLattice lat = a1();
  auto same = normalize_at_p(lat, index_vector(lat, 2, {1}, 3), 2);
  EXPECT_EQ(same.kind, NormalizeKind::identity);
  auto sw = normalize_at_p(lat, index_vector(lat, 1, {0}, 2), 2);
  EXPECT_EQ(sw.kind, NormalizeKind::swap);
  EXPECT_EQ(sw.lambda, index_vector(lat, 2, {0}, 1));
  auto tr = normalize_at_p(lat, index_vector(lat, 2, {1}, 4), 2);
  EXPECT_EQ(tr.lambda.m() % 2, 1);
  for (const EvenLattice& L : {a1(), a2(), s8()})
    for (const auto& x : cone_vectors(L, Rational(4))) {
      for (i64 p : {2, 3, 5}) {
        auto y = normalize_at_p(L, x, p).lambda;
        EXPECT_EQ(y.q0(), x.q0());
        EXPECT_EQ(y.eps(), x.eps());
        EXPECT_EQ(y.level(), x.level());
        EXPECT_TRUE(is_normalized_at(y, p));
      }
    }
}

TEST(Lattice, GroupGenerators) {
  for (const EvenLattice& L : {a1(), a2(), s8(), e8()}) {
    ExtendedGram ext = extend(L);
    std::size_t d = L.rank() + 2;
    EXPECT_TRUE(group_membership(ext, IntMatrix::identity(d + 2)));
    EXPECT_TRUE(group_membership(ext, make_inversion(ext)));
    EXPECT_EQ(make_translation(ext, Vec(d, 0)), IntMatrix::identity(d + 2));
    EXPECT_EQ(make_rotation(ext, IntMatrix::identity(d)), IntMatrix::identity(d + 2));
    EXPECT_TRUE(group_membership(ext, make_rotation(ext, swap_matrix(ext))));
    std::mt19937 rng(static_cast<unsigned>(d));
    std::uniform_int_distribution<int> r(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
      Vec a(d), b(d), ab(d), u(L.rank());
      for (std::size_t i = 0; i < d; ++i) {
        a[i] = r(rng);
        b[i] = r(rng);
        ab[i] = a[i] + b[i];
      }
      for (auto& c : u) c = r(rng);
      IntMatrix ta = make_translation(ext, a);
      EXPECT_TRUE(group_membership(ext, ta));
      EXPECT_TRUE(group_membership(ext, make_lower_translation(ext, a)));
      EXPECT_EQ(ta * make_translation(ext, b), make_translation(ext, ab));
      EXPECT_TRUE(group_membership(ext, make_rotation(ext, translation_matrix(L, u))));
    }
    EXPECT_THROW(make_rotation(ext, IntMatrix(d, d)), ValidationError);
  }
}

TEST(Lattice, GramFileErrors) {
  std::istringstream ok("# comment\n2\n2 1\n1 2\n");
  EXPECT_EQ(read_gram(ok).det(), 3);
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_gram(in);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("2\n2 1\n0 2\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("1\n3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("2\n2 3\n3 2\n").find("line"), std::string::npos);
  EXPECT_NE(message("2\n2 1\n").find("line"), std::string::npos);
}

TEST(Lattice, ConeEnumerationMatchesBox) {
  for (const EvenLattice& L : {a1(), a2(), s8()}) {
    Rational bound(3);
    auto fast = cone_vectors(L, bound);
    std::set<std::tuple<i64, Vec, i64>> got, want;
    for (const auto& x : fast) got.insert({x.l(), x.w(), x.m()});
    i64 box = 12;
    std::size_t n = L.rank();
    Vec w(n, -box);
    while (true) {
      if (L.q_of_w(w) <= bound)
        for (i64 l = 0; l <= 6; ++l)
          for (i64 m = 0; m <= 6; ++m) {
            IndexVector x(L, l, w, m);
            if (x.is_zero() || !in_closed_cone(x) || x.q0() > bound) continue;
            bool ray = std::all_of(w.begin(), w.end(), [](i64 c) { return c == 0; }) && (l == 0 || m == 0);
            if (ray && std::max(l, m) > 6) continue;
            want.insert({l, w, m});
          }
      std::size_t k = n;
      while (k > 0 && ++w[k - 1] > box) w[--k] = -box;
      if (k == 0) break;
    }
    EXPECT_EQ(got, want);
    for (std::size_t i = 1; i < fast.size(); ++i) EXPECT_LE(fast[i - 1].q0(), fast[i].q0());
  }
}
