#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "orthocoeff/lattice.hpp"

namespace orthocoeff {

// All integer w with Q(S^-1 w) <= bound, by Fincke-Pohst on the dual form
// w^T S^-1 w / 2. The float pruning has slack; membership is decided exactly.
inline std::vector<Vec> short_dual_vectors(const EvenLattice& lat, const Rational& bound) {
  std::size_t n = lat.rank();
  std::vector<Vec> out;
  if (bound < 0) return out;
  // A = S^-1 / 2 as doubles, then the q_ij decomposition.
  std::vector<std::vector<double>> q(n, std::vector<double>(n, 0));
  double det = static_cast<double>(lat.det());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = static_cast<double>(lat.adjugate()(i, j)) / det / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  double c = to_double(bound) * (1 + 1e-9) + 1e-9;
  Vec x(n, 0);
  std::vector<double> t(n + 1, 0), center(n, 0);
  // Recursive descent from the last coordinate.
  auto rec = [&](auto&& self, std::size_t depth, double remaining) -> void {
    std::size_t i = depth - 1;
    double ctr = 0;
    for (std::size_t j = i + 1; j < n; ++j) ctr -= q[i][j] * static_cast<double>(x[j]);
    double r = std::sqrt(std::max(remaining, 0.0) / q[i][i]);
    i64 lo = static_cast<i64>(std::ceil(ctr - r - 1e-9)), hi = static_cast<i64>(std::floor(ctr + r + 1e-9));
    for (i64 v = lo; v <= hi; ++v) {
      x[i] = v;
      double d = static_cast<double>(v) - ctr;
      double rem = remaining - q[i][i] * d * d;
      if (rem < -1e-9) continue;
      if (i == 0) {
        if (lat.q_of_w(x) <= bound) out.push_back(x);
      } else {
        self(self, i, rem);
      }
    }
    x[i] = 0;
  };
  rec(rec, n, c);
  std::sort(out.begin(), out.end());
  return out;
}

// Table domain: closed-cone vectors with Q_0 <= bound whose w has Q(mu) <= bound.
// For Q(mu) > 0 this forces 1 <= l, m <= 2 bound; the boundary rays (l, 0, 0) and
// (0, 0, m) are cut at max(1, floor(2 bound)). Sorted by (Q_0, l, w, m).
inline std::vector<IndexVector> cone_vectors(const EvenLattice& lat, const Rational& bound, bool include_zero = false) {
  std::vector<IndexVector> out;
  if (bound < 0) return out;
  Rational twice_bound = 2 * bound;
  BigInt twice = num(twice_bound) / den(twice_bound);
  i64 cap = std::max<i64>(1, twice.convert_to<i64>());
  Vec zero(lat.rank(), 0);
  if (include_zero) out.emplace_back(lat, 0, zero, 0);
  for (i64 t = 1; t <= cap; ++t) {
    out.emplace_back(lat, t, zero, 0);
    out.emplace_back(lat, 0, zero, t);
  }
  for (const Vec& w : short_dual_vectors(lat, bound)) {
    Rational qm = lat.q_of_w(w);
    for (i64 l = 1; l <= cap; ++l)
      for (i64 m = 1; l * m <= cap; ++m) {
        Rational q0 = Rational(l * m) - qm;
        if (q0 >= 0 && q0 <= bound) out.emplace_back(lat, l, w, m);
      }
  }
  std::sort(out.begin(), out.end(), [](const IndexVector& a, const IndexVector& b) {
    if (a.q0() != b.q0()) return a.q0() < b.q0();
    if (a.l() != b.l()) return a.l() < b.l();
    if (a.w() != b.w()) return a.w() < b.w();
    return a.m() < b.m();
  });
  return out;
}

}  // namespace orthocoeff
