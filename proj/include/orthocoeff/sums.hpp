#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "orthocoeff/lattice.hpp"
#include "orthocoeff/padic_count.hpp"

namespace orthocoeff {

inline constexpr i64 kDefaultBudget = 100000000;

namespace detail {

inline std::string context(const IndexVector& x, const std::string& extra) { return "lambda=" + x.str() + ", " + extra; }

// Sum of cnt[r] * e(r / modulus), accumulated in index order.
inline std::complex<double> phase_sum(const std::vector<i64>& cnt) {
  double re = 0, im = 0;
  double m = static_cast<double>(cnt.size());
  for (std::size_t r = 0; r < cnt.size(); ++r) {
    if (!cnt[r]) continue;
    double a = 2 * std::numbers::pi * static_cast<double>(r) / m;
    re += static_cast<double>(cnt[r]) * std::cos(a);
    im += static_cast<double>(cnt[r]) * std::sin(a);
  }
  return {re, im};
}

inline i64 round_to_integer(std::complex<double> z, const std::string& where) {
  double r = std::round(z.real());
  if (std::abs(z.real() - r) > 1e-6 || std::abs(z.imag()) > 1e-6)
    throw AssertionFailure("non-integer exponential sum " + std::to_string(z.real()) + "+" +
                           std::to_string(z.imag()) + "i at " + where);
  return static_cast<i64>(r);
}

inline void check_budget(i64 gamma, std::size_t dims, i64 budget, const std::string& where) {
  BigInt work = ipow(BigInt(gamma), static_cast<unsigned>(dims));
  if (work > budget)
    throw BudgetExceeded("enumeration of " + work.str() + " residue vectors exceeds budget " +
                         std::to_string(budget) + " at " + where);
}

// Counts of d mod gamma with Q_0(d) = 0 mod gamma, bucketed by (lambda, d)_0 mod gamma.
inline std::vector<i64> isotropic_phase_counts(const EvenLattice& lat, const IndexVector& x, i64 gamma,
                                               bool primitive) {
  std::size_t n = lat.rank();
  std::vector<i64> cnt(static_cast<std::size_t>(gamma), 0);
  // For each d1: g = gcd(d1, gamma), and the inverse of d1/g modulo gamma/g.
  std::vector<i64> g1(gamma), inv1(gamma);
  for (i64 d1 = 0; d1 < gamma; ++d1) {
    g1[d1] = std::gcd(d1, gamma);
    i64 sub = gamma / g1[d1];
    inv1[d1] = sub == 1 ? 0 : inverse_mod(d1 / g1[d1], sub);
  }
  i64 lm = mod(x.l(), gamma), mm = mod(x.m(), gamma);
  Vec frak(n, 0);
  while (true) {
    i64 qd = lat.q_int(frak);
    Vec sd = lat.gram().apply(frak);
    i64 g0 = gamma;
    for (i64 c : sd) g0 = std::gcd(g0, c);
    i64 ph0 = 0;
    for (std::size_t i = 0; i < n; ++i) ph0 -= mod(x.w()[i], gamma) * frak[i];
    ph0 = mod(ph0, gamma);
    i64 qmod = mod(qd, gamma);
    for (i64 d1 = 0; d1 < gamma; ++d1) {
      i64 g = g1[d1];
      if (qmod % g) continue;
      i64 sub = gamma / g;
      i64 d2 = sub == 1 ? 0 : mulmod(qmod / g, inv1[d1], sub);
      i64 ph1 = mod(ph0 + mm * d1, gamma);
      i64 gd = std::gcd(g0, d1);
      for (; d2 < gamma; d2 += sub) {
        if (primitive && gd != 1) {
          i64 h = std::gcd(gd, d2);
          if (h != 1) {
            i64 delta = (qd - d1 * d2) / gamma;
            if (std::gcd(h, delta) != 1) continue;
          }
        }
        ++cnt[static_cast<std::size_t>(mod(ph1 + lm * d2, gamma))];
      }
    }
    std::size_t k = n;
    while (k > 0 && ++frak[k - 1] == gamma) frak[--k] = 0;
    if (k == 0) break;
  }
  return cnt;
}

}  // namespace detail

// K(alpha, beta; gamma) = sum over units j mod gamma of e((alpha j + beta j^{-1}) / gamma).
inline std::complex<double> kloosterman(i64 alpha, i64 beta, i64 gamma) {
  if (gamma < 1) throw ValidationError("kloosterman: gamma must be positive");
  std::vector<i64> cnt(static_cast<std::size_t>(gamma), 0);
  for (i64 j = 0; j < gamma; ++j) {
    if (std::gcd(j, gamma) != 1) continue;
    i64 r = mod(mulmod(mod(alpha, gamma), j, gamma) + mulmod(mod(beta, gamma), inverse_mod(j, gamma), gamma), gamma);
    ++cnt[static_cast<std::size_t>(r)];
  }
  return detail::phase_sum(cnt);
}

// Dirichlet coefficient a(lambda, gamma) of the standard cusp.
inline i64 a_bruteforce(const EvenLattice& lat, const IndexVector& x, i64 gamma, i64 budget = kDefaultBudget) {
  if (gamma < 1) throw ValidationError("a_bruteforce: gamma must be positive");
  std::string where = detail::context(x, "gamma=" + std::to_string(gamma));
  detail::check_budget(gamma, lat.rank() + 2, budget, where);
  return detail::round_to_integer(detail::phase_sum(detail::isotropic_phase_counts(lat, x, gamma, true)), where);
}

struct BSum {
  i64 value;
  bool nonmaximal_prime;  // some p | gamma has L_p non-maximal
};

inline BSum b_bruteforce(const EvenLattice& lat, const IndexVector& x, i64 gamma, i64 budget = kDefaultBudget) {
  if (gamma < 1) throw ValidationError("b_bruteforce: gamma must be positive");
  std::string where = detail::context(x, "gamma=" + std::to_string(gamma));
  detail::check_budget(gamma, lat.rank() + 2, budget, where);
  bool warn = false;
  for (i64 p : prime_divisors(gamma))
    if (!is_maximal_at(lat, p)) warn = true;
  i64 v = detail::round_to_integer(detail::phase_sum(detail::isotropic_phase_counts(lat, x, gamma, false)), where);
  return {v, warn};
}

enum class PairingSign { minus, plus };

// b(lambda, p^nu) through Kloosterman sums; lambda is normalized at p first.
inline std::complex<double> b_kloosterman(const EvenLattice& lat, const IndexVector& x, i64 p, int nu,
                                          PairingSign sign = PairingSign::minus, i64 budget = kDefaultBudget) {
  if (!is_maximal_at(lat, p))
    throw NonMaximalError(p, "b_kloosterman: L_p not maximal at p=" + std::to_string(p));
  if (nu == 0) return 1;
  std::size_t n = lat.rank();
  i64 pn = ipow64(p, nu);
  std::string where = detail::context(x, "p=" + std::to_string(p) + ", nu=" + std::to_string(nu));
  detail::check_budget(pn, n, budget, where);
  IndexVector y = normalize_at_p(lat, x, p).lambda;
  int nul = nu_lambda(y, p);
  std::complex<double> total = 0;
  for (int t = 0; t <= std::min(nu, nul); ++t) {
    i64 pt = ipow64(p, t), mod_t = ipow64(p, nu - t);
    // Per-t accumulation: bucket the outer phase by (l-index, beta) to reuse Kloosterman sums.
    std::map<i64, std::vector<i64>> by_beta;
    Vec frak(n, 0);
    while (true) {
      i64 qv = lat.q_int(frak);
      if (mod(qv, pt) == 0) {
        i64 pair = 0;
        for (std::size_t i = 0; i < n; ++i) pair += frak[i] * mod(y.w()[i], pn);
        if (sign == PairingSign::minus) pair = -pair;
        // m Q(l) / p^{2t} = (m / p^t) (Q(l) / p^t)
        i64 beta = mulmod(mod(y.m() / pt, mod_t), mod(qv / pt, mod_t), mod_t);
        auto& cnt = by_beta[beta];
        if (cnt.empty()) cnt.assign(static_cast<std::size_t>(pn), 0);
        ++cnt[static_cast<std::size_t>(mod(pair, pn))];
      }
      std::size_t k = n;
      while (k > 0 && ++frak[k - 1] == pn) frak[--k] = 0;
      if (k == 0) break;
    }
    // The lifts of d_1 mod p^nu contribute a factor p^t.
    for (const auto& [beta, cnt] : by_beta)
      total += static_cast<double>(pt) * detail::phase_sum(cnt) * kloosterman(y.l(), beta, mod_t);
  }
  return total;
}

// N(lambda, p^nu, p^t) from the two congruences of the representation count,
// by direct enumeration of v mod p^nu.
inline BigInt rep_number_bruteforce(const EvenLattice& lat, const IndexVector& x, i64 p, int nu, int t,
                                    i64 budget = kDefaultBudget) {
  int nul = nu_lambda(x, p);
  std::string where = detail::context(x, "p=" + std::to_string(p) + ", nu=" + std::to_string(nu) +
                                             ", t=" + std::to_string(t));
  if (t < 0 || t > std::min(nu, nul)) throw ValidationError("rep_number: t out of range at " + where);
  if (!is_normalized_at(x, p)) throw ValidationError("rep_number: unnormalized lambda at " + where);
  std::size_t n = lat.rank();
  i64 pn = ipow64(p, nu), pt = ipow64(p, t), pa = ipow64(p, nul - t);
  detail::check_budget(pn, n, budget, where);
  i64 mstar = x.m() / ipow64(p, nul);
  i64 constant = mulmod(mulmod(mod(x.l(), pn), mod(mstar, pn), pn), mod(pt, pn), pn);
  BigInt count = 0;
  Vec v(n, 0);
  while (true) {
    i64 qv = lat.q_int(v);
    if (mod(qv, pt) == 0) {
      i64 s = mulmod(mod(pa, pn), mod(qv, pn), pn) + constant;
      for (std::size_t i = 0; i < n; ++i) s -= mulmod(v[i], mod(x.w()[i], pn), pn);
      if (mod(s, pn) == 0) ++count;
    }
    std::size_t k = n;
    while (k > 0 && ++v[k - 1] == pn) v[--k] = 0;
    if (k == 0) break;
  }
  return count;
}

// Same count through a reduction to c + b.v + Q(v) = 0 and Hensel lifting.
inline BigInt rep_number(const EvenLattice& lat, const IndexVector& x, i64 p, int nu, int t) {
  int nul = nu_lambda(x, p);
  std::string where = detail::context(x, "p=" + std::to_string(p) + ", nu=" + std::to_string(nu) +
                                             ", t=" + std::to_string(t));
  if (t < 0 || t > std::min(nu, nul)) throw ValidationError("rep_number: t out of range at " + where);
  if (!is_normalized_at(x, p)) throw ValidationError("rep_number: unnormalized lambda at " + where);
  std::size_t n = lat.rank();
  Vec zero(n, 0);
  if (nu < nul) {
    BigInt base = count_quadratic_congruence(lat.gram(), p, t, 0, zero, 1);
    return base * ipow(BigInt(p), static_cast<unsigned>(static_cast<int>(n) * (nu - t)));
  }
  int a = nul - t, j = nu - a;
  i64 pa = ipow64(p, a), pj = ipow64(p, j);
  Vec b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = mod(-(x.w()[i] / pa), pj);
  // l m / p^{2a} reduced mod p^j
  i64 c = mulmod(mod(x.l() / pa, pj), mod(x.m() / pa, pj), pj);
  return count_quadratic_congruence(lat.gram(), p, j, c, b, 1) *
         ipow(BigInt(p), static_cast<unsigned>(static_cast<int>(n) * a));
}

// w_p = 1 + 2 nu_p(2 level Q_0).
inline int stabilization_index(const IndexVector& x, i64 p) {
  if (x.q0() == 0) throw ValidationError("stabilization index needs Q_0(lambda) != 0, lambda=" + x.str());
  Rational v = 2 * x.level() * x.q0();
  if (!is_integer(v)) throw AssertionFailure("2 level Q_0 not integral for " + x.str());
  return 1 + 2 * valuation(num(v), p);
}

struct RepNumberTable {
  IndexVector lambda;  // normalized at p
  i64 p = 2;
  int nu_lambda = 0;
  int r = 0;  // nu_p(level)
  int wp = 1;
  std::map<std::pair<int, int>, BigInt> entries;  // (nu, t) -> N(lambda, p^nu, p^t)
  std::vector<BigInt> nstar;                      // nu -> N*(lambda, p^nu)
};

inline RepNumberTable rep_table(const EvenLattice& lat, const IndexVector& x, i64 p, int nu_max = -1) {
  RepNumberTable tab;
  tab.lambda = normalize_at_p(lat, x, p).lambda;
  tab.p = p;
  tab.nu_lambda = nu_lambda(tab.lambda, p);
  tab.r = valuation(tab.lambda.level(), p);
  tab.wp = stabilization_index(tab.lambda, p);
  if (nu_max < 0) nu_max = tab.wp + 1;
  for (int nu = 0; nu <= nu_max; ++nu) {
    BigInt total = 0;
    for (int t = 0; t <= std::min(nu, tab.nu_lambda); ++t) {
      BigInt c = rep_number(lat, tab.lambda, p, nu, t);
      tab.entries[{nu, t}] = c;
      total += c;
    }
    tab.nstar.push_back(total);
  }
  BigInt growth = ipow(BigInt(p), static_cast<unsigned>(lat.rank() - 1));
  for (int nu = tab.wp; nu + 1 <= nu_max; ++nu)
    if (tab.nstar[nu + 1] != growth * tab.nstar[nu])
      throw AssertionFailure("stabilization violated: N*(p^" + std::to_string(nu + 1) + ") = " +
                             tab.nstar[nu + 1].str() + " != p^(n-1) N*(p^" + std::to_string(nu) + ") at " +
                             detail::context(x, "p=" + std::to_string(p)));
  return tab;
}

// b(lambda, p^nu) from representation numbers: p^nu N*(p^nu) - p^(nu-1+n) N*(p^(nu-1)).
inline BigInt b_from_table(const RepNumberTable& tab, int nu, std::size_t n) {
  BigInt v = ipow(BigInt(tab.p), static_cast<unsigned>(nu)) * tab.nstar.at(nu);
  if (nu > 0) v -= ipow(BigInt(tab.p), static_cast<unsigned>(nu - 1 + static_cast<int>(n))) * tab.nstar.at(nu - 1);
  return v;
}

struct LocalFactor {
  i64 p = 2;
  int wp = 1;
  Rational value;
  RepNumberTable table;
};

inline LocalFactor local_factor(const EvenLattice& lat, const IndexVector& x, i64 p, int k) {
  int n = static_cast<int>(lat.rank());
  if (k <= n + 2) throw ValidationError("local_factor: weight must exceed n+2");
  if (!is_maximal_at(lat, p))
    throw NonMaximalError(p, "local_factor: L_p not maximal at p=" + std::to_string(p) + ", " +
                                 detail::context(x, "k=" + std::to_string(k)));
  LocalFactor lf;
  lf.p = p;
  lf.table = rep_table(lat, x, p);
  lf.wp = lf.table.wp;
  Rational pr(p), s = 0;
  for (int nu = 0; nu < lf.wp; ++nu) s += Rational(lf.table.nstar[nu]) * rpow(pr, nu * (1 - k));
  lf.value = (1 - rpow(pr, n - k)) * s + Rational(lf.table.nstar[lf.wp]) * rpow(pr, lf.wp * (1 - k));
  return lf;
}

}  // namespace orthocoeff
