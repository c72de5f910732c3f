#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthocoeff/special_value.hpp"
#include "orthocoeff/sums.hpp"

namespace orthocoeff {

inline void check_weight(const EvenLattice& lat, int k) {
  int n = static_cast<int>(lat.rank());
  if (k % 2 || k <= n + 2)
    throw ValidationError("weight k=" + std::to_string(k) + " must be even and exceed n+2=" + std::to_string(n + 2));
}

// (2 pi)^(2k - n/2) / (sqrt(det S) Gamma(k) Gamma(k - n/2))
inline SpecialValue c_bullet(const EvenLattice& lat, int k) {
  int n = static_cast<int>(lat.rank());
  int twice = 4 * k - n;  // twice the exponent of 2 pi
  SpecialValue two_pi(Rational(ipow(BigInt(2), static_cast<unsigned>(twice / 2))), twice, twice % 2 ? 2 : 1);
  return two_pi / (SpecialValue::sqrt_of(Rational(lat.det())) * gamma_special(2 * k) * gamma_special(2 * k - n));
}

// Q_0(lambda)^(k - (n+2)/2)
inline SpecialValue q0_power(const IndexVector& x, int n, int k) {
  int twice = 2 * k - n - 2;
  SpecialValue v(rpow(x.q0(), twice / 2));
  if (twice % 2) v *= SpecialValue::sqrt_of(x.q0());
  return v;
}

// Singular coefficient of E_{k,S} at the standard cusp, from the Moebius series
// summed in closed form: sum over alpha = 0 mod g of mu(alpha) alpha^-k equals
// mu(g) / (zeta(k) prod_{p|g} (p^k - 1)).
inline Rational singular_coefficient(const EvenLattice& lat, const IndexVector& x, int k) {
  check_weight(lat, k);
  if (x.is_zero()) return 1;
  if (!in_closed_cone(x)) return 0;
  if (x.q0() != 0)
    throw ValidationError("singular_coefficient: Q_0 > 0 at " + x.str() + " belongs to the cusp term");
  i64 eps = x.eps();
  i64 order = divide(lat, x, eps)->level();
  Rational s = 0;
  for (i64 d : divisors(eps)) {
    i64 g = order / std::gcd(order, eps / d);
    int mu = mobius(g);
    if (!mu) continue;
    Rational term = mu * rpow(Rational(d), k - 1);
    for (i64 p : prime_divisors(g)) term /= ipow(BigInt(p), static_cast<unsigned>(k)) - 1;
    s += term;
  }
  return -2 * k / bernoulli(k) * s;
}

// The same coefficient for E*_{k,S}: divisor sum over d with lambda/d in L_0.
inline Rational singular_coefficient_estar(const EvenLattice& lat, const IndexVector& x, int k) {
  check_weight(lat, k);
  if (x.is_zero()) return 1;
  if (!in_closed_cone(x)) return 0;
  if (x.q0() != 0)
    throw ValidationError("singular_coefficient_estar: Q_0 > 0 at " + x.str() + " belongs to the cusp term");
  Rational s = 0;
  for (i64 d : divisors(x.eps()))
    if (divisible_in_l0(lat, x, d)) s += rpow(Rational(d), k - 1);
  return -2 * k / bernoulli(k) * s;
}

// Primes of 2 det(S) num(level^2 Q_0).
inline std::vector<i64> bad_primes(const EvenLattice& lat, const IndexVector& x) {
  Rational v = Rational(x.level()) * x.level() * x.q0();
  std::vector<i64> ps{2};
  for (i64 p : prime_divisors(lat.det())) ps.push_back(p);
  for (auto [p, e] : factorize(num(v))) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

struct ClosedFormDetail {
  i64 D = 1;
  std::vector<i64> bad_primes;
  std::vector<LocalFactor> local_factors;
  std::vector<i64> omitted_primes;  // non-maximal primes whose L_lambda(k,p) is left out
  std::vector<std::pair<std::string, SpecialValue>> factors;
  SpecialValue total;

  std::string breakdown() const {
    std::string s;
    for (const auto& [name, v] : factors) s += name + " = " + v.str() + "; ";
    return s + "total = " + total.str();
  }
};

namespace detail {

inline ClosedFormDetail assemble_closed_form(const EvenLattice& lat, const IndexVector& x, int k, bool skip_nonmaximal) {
  check_weight(lat, k);
  if (!in_open_cone(x)) throw ValidationError("closed form needs lambda in the open cone, got " + x.str());
  int n = static_cast<int>(lat.rank());
  ClosedFormDetail out;
  out.bad_primes = bad_primes(lat, x);
  Rational scaled = Rational(x.level()) * x.level() * x.q0();
  if (!is_integer(scaled)) throw AssertionFailure("level^2 Q_0 not integral at " + x.str());
  if (n % 2 == 0) {
    out.D = (n / 2 % 2 ? -1 : 1) * lat.det();
  } else {
    // Q_0 = n_0 f^2 with f prime to 2 det S; n_1 = n_0 level^2.
    BigInt f = 1;
    for (auto [p, e] : factorize(num(scaled)))
      if (lat.det() % p && p != 2) f *= ipow(BigInt(p), static_cast<unsigned>(e / 2));
    BigInt n1 = num(scaled) / (f * f);
    out.D = 2 * ((n + 1) / 2 % 2 ? -1 : 1) * n1.convert_to<i64>() * lat.det();
  }
  KroneckerChar chi(out.D);
  SpecialValue total = c_bullet(lat, k);
  out.factors.emplace_back("c_bullet", total);
  SpecialValue zk = zeta_special(k);
  out.factors.emplace_back("zeta(k)", zk);
  total /= zk;
  if (n % 2 == 0) {
    SpecialValue lv = l_special(k - n / 2, chi);
    out.factors.emplace_back("L(k-n/2,chi_D)", lv);
    total /= lv;
  } else {
    SpecialValue lv = l_special(k - (n + 1) / 2, chi);
    SpecialValue z2 = zeta_special(2 * k - n - 1);
    out.factors.emplace_back("L(k-(n+1)/2,chi_D)", lv);
    out.factors.emplace_back("zeta(2k-n-1)", z2);
    total = total * lv / z2;
  }
  SpecialValue qp = q0_power(x, n, k);
  out.factors.emplace_back("Q_0^(k-(n+2)/2)", qp);
  total *= qp;
  Rational euler = 1;
  for (i64 p : out.bad_primes) {
    Rational pr(p);
    Rational ch = n % 2 == 0 ? 1 / (1 - chi(p) * rpow(pr, n / 2 - k))
                             : (1 - chi(p) * rpow(pr, (n + 1) / 2 - k)) / (1 - rpow(pr, n + 1 - 2 * k));
    euler *= ch;
    if (!is_maximal_at(lat, p)) {
      if (!skip_nonmaximal)
        throw NonMaximalError(p, "closed form: L_p not maximal at p=" + std::to_string(p) + " for lambda=" +
                                     x.str() + "; use the truncated-series path");
      out.omitted_primes.push_back(p);
      continue;
    }
    LocalFactor lf = local_factor(lat, x, p, k);
    euler *= lf.value;
    out.local_factors.push_back(std::move(lf));
  }
  out.factors.emplace_back("euler_product", SpecialValue(euler));
  total *= SpecialValue(euler);
  out.total = total;
  if (!total.is_rational())
    throw AssertionFailure("closed form is not rational at " + x.str() + ", k=" + std::to_string(k) + ": " +
                           out.breakdown());
  return out;
}

}  // namespace detail

inline ClosedFormDetail cusp_coefficient_closed_detail(const EvenLattice& lat, const IndexVector& x, int k) {
  return detail::assemble_closed_form(lat, x, k, false);
}

inline Rational cusp_coefficient_closed(const EvenLattice& lat, const IndexVector& x, int k) {
  return cusp_coefficient_closed_detail(lat, x, k).total.to_rational();
}

// Second closed form for n even and primitive lambda on maximal L, written with
// generalized Bernoulli numbers of the primitive character.
inline Rational cusp_coefficient_bernoulli(const EvenLattice& lat, const IndexVector& x, int k) {
  check_weight(lat, k);
  int n = static_cast<int>(lat.rank());
  if (n % 2) throw ValidationError("cusp_coefficient_bernoulli: n must be even");
  if (x.eps() != 1) throw ValidationError("cusp_coefficient_bernoulli: lambda must be primitive, got " + x.str());
  if (!in_open_cone(x)) throw ValidationError("cusp_coefficient_bernoulli: lambda must lie in the open cone");
  if (!is_maximal(lat)) throw ValidationError("cusp_coefficient_bernoulli: lattice must be maximal");
  i64 D = (n / 2 % 2 ? -1 : 1) * lat.det();
  KroneckerChar chi(D), prim(chi.fund());
  i64 f = chi.fund() < 0 ? -chi.fund() : chi.fund();
  int e = k - (n + 2) / 2;
  Rational scaled = Rational(x.level()) * x.level() * x.q0();
  i64 dd = 1;
  for (auto [p, v] : factorize(num(scaled)))
    if (p != 2 && lat.det() % p) dd *= ipow64(p, v);
  Rational value = (n / 4 + (n % 4 ? 1 : 0)) % 2 ? -1 : 1;
  value *= 2 * k / bernoulli(k);
  value *= 2 * (k - n / 2) / generalized_bernoulli(k - n / 2, chi);
  value *= rpow(Rational(f), e) / chi.f0();
  value *= prim(dd);
  value *= rpow(x.q0() / dd, e);
  value *= sigma_chi(e, prim, dd);
  for (i64 p : prime_divisors(lat.det()))
    if (f % p) value /= 1 - prim(p) * rpow(Rational(p), n / 2 - k);
  for (i64 p : prime_divisors(2 * lat.det()))
    value *= local_factor(lat, x, p, k).value / (1 - chi(p) * rpow(Rational(p), n / 2 - k));
  return value;
}

enum class SeriesVariant { e, e_star };

struct SeriesResult {
  double value = 0;
  double tail_bound = 0;
  int gamma_max = 0;
  std::vector<i64> dirichlet;  // a(lambda, gamma) or b(lambda, gamma), gamma = 1..gamma_max
};

namespace detail {

inline double prefactor(const EvenLattice& lat, const IndexVector& x, int k) {
  return (c_bullet(lat, k) * q0_power(x, static_cast<int>(lat.rank()), k)).to_double();
}

// Sum over gamma > G of gamma^(n+2-k), bounded by the integral from G.
inline double tail_sum(int gamma_max, int n, int k) {
  int s = k - n - 2;
  if (s <= 1) return std::numeric_limits<double>::infinity();
  return std::pow(static_cast<double>(gamma_max), 1 - s) / (s - 1);
}

}  // namespace detail

inline SeriesResult cusp_coefficient_series(const EvenLattice& lat, const IndexVector& x, int k, int gamma_max,
                                            SeriesVariant variant = SeriesVariant::e, i64 budget = kDefaultBudget) {
  check_weight(lat, k);
  if (x.q0() <= 0) throw ValidationError("cusp_coefficient_series needs Q_0 > 0, got " + x.str());
  SeriesResult r;
  r.gamma_max = gamma_max;
  double s = 0;
  for (i64 g = 1; g <= gamma_max; ++g) {
    i64 c = variant == SeriesVariant::e ? a_bruteforce(lat, x, g, budget) : b_bruteforce(lat, x, g, budget).value;
    r.dirichlet.push_back(c);
    s += static_cast<double>(c) * std::pow(static_cast<double>(g), -k);
  }
  double pre = detail::prefactor(lat, x, k);
  if (variant == SeriesVariant::e_star) pre /= zeta_special(k).to_double();
  r.value = pre * s;
  r.tail_bound = std::abs(pre) * detail::tail_sum(gamma_max, static_cast<int>(lat.rank()), k);
  return r;
}

struct HybridResult {
  double value = 0;
  double tail_bound = 0;
  ClosedFormDetail exact_part;
  std::vector<std::pair<i64, double>> local_series;  // p -> truncated sum of (1*a)(p^nu) p^(-nu k)
};

// Closed form with the Euler factors at non-maximal primes replaced by truncated
// local Dirichlet series of 1*a.
inline HybridResult cusp_coefficient_hybrid(const EvenLattice& lat, const IndexVector& x, int k,
                                            i64 budget = kDefaultBudget) {
  HybridResult h;
  h.exact_part = detail::assemble_closed_form(lat, x, k, true);
  double exact = to_double(h.exact_part.total.to_rational());
  int n = static_cast<int>(lat.rank());
  double value = exact, upper = std::abs(exact);
  for (i64 p : h.exact_part.omitted_primes) {
    int top = 0;
    while (ipow(BigInt(p), static_cast<unsigned>((top + 1) * (n + 2))) <= budget) ++top;
    double fp = 0, partial = 0, pk = std::pow(static_cast<double>(p), -k);
    for (int nu = 0; nu <= top; ++nu) {
      partial += static_cast<double>(a_bruteforce(lat, x, ipow64(p, nu), budget));
      fp += partial * std::pow(pk, nu);
    }
    double ratio = std::pow(static_cast<double>(p), n + 2 - k);
    double c = std::pow(static_cast<double>(p), n + 2) / (std::pow(static_cast<double>(p), n + 2) - 1);
    double tail = c * std::pow(ratio, top + 1) / (1 - ratio);
    h.local_series.emplace_back(p, fp);
    value *= fp;
    upper *= std::abs(fp) + tail;
  }
  h.value = value;
  h.tail_bound = upper - std::abs(value);
  return h;
}

enum class CoefficientPath { constant, singular, closed_form, truncated_series, oracle };

inline std::string to_string(CoefficientPath p) {
  switch (p) {
    case CoefficientPath::constant: return "constant";
    case CoefficientPath::singular: return "singular";
    case CoefficientPath::closed_form: return "closed_form";
    case CoefficientPath::truncated_series: return "truncated_series";
    case CoefficientPath::oracle: return "oracle";
  }
  return "unknown";
}

struct Diagnostics {
  std::vector<LocalFactor> local_factors;
  i64 character_d = 0;
  std::vector<i64> bad_primes;
  std::vector<i64> nonmaximal_primes;
  double tail_bound = 0;
  std::string breakdown;
};

struct CoefficientRecord {
  IndexVector lambda;
  int k = 0;
  std::optional<Rational> value_exact;
  double value_float = 0;
  CoefficientPath path = CoefficientPath::constant;
  Diagnostics diagnostics;
};

inline CoefficientRecord coefficient(const EvenLattice& lat, const IndexVector& x, int k, i64 budget = kDefaultBudget) {
  check_weight(lat, k);
  CoefficientRecord rec;
  rec.lambda = x;
  rec.k = k;
  auto exact = [&](Rational v, CoefficientPath path) {
    rec.value_float = to_double(v);
    rec.value_exact = std::move(v);
    rec.path = path;
  };
  if (x.is_zero()) {
    exact(1, CoefficientPath::constant);
  } else if (!in_closed_cone(x)) {
    exact(0, CoefficientPath::constant);
  } else if (x.q0() == 0) {
    exact(singular_coefficient(lat, x, k), CoefficientPath::singular);
  } else {
    auto bad = bad_primes(lat, x);
    bool maximal = std::all_of(bad.begin(), bad.end(), [&](i64 p) { return is_maximal_at(lat, p); });
    if (maximal) {
      auto d = cusp_coefficient_closed_detail(lat, x, k);
      exact(d.total.to_rational(), CoefficientPath::closed_form);
      rec.diagnostics.local_factors = d.local_factors;
      rec.diagnostics.character_d = d.D;
      rec.diagnostics.bad_primes = d.bad_primes;
      rec.diagnostics.breakdown = d.breakdown();
    } else {
      auto h = cusp_coefficient_hybrid(lat, x, k, budget);
      rec.value_float = h.value;
      rec.path = CoefficientPath::truncated_series;
      rec.diagnostics.local_factors = h.exact_part.local_factors;
      rec.diagnostics.character_d = h.exact_part.D;
      rec.diagnostics.bad_primes = h.exact_part.bad_primes;
      rec.diagnostics.nonmaximal_primes = h.exact_part.omitted_primes;
      rec.diagnostics.tail_bound = h.tail_bound;
      rec.diagnostics.breakdown = h.exact_part.breakdown();
    }
  }
  return rec;
}

// Zero-dimensional cusp in standard form (1, 0, c, 0, Q(c)) with c in L^#, Q(c) integral.
struct Cusp {
  Vec w;       // S c
  Rational q;  // Q(c)
  i64 order = 1;

  RatVec frak_c(const EvenLattice& lat) const { return lat.mu_of_w(w); }
  RatVec standard_form(const EvenLattice& lat) const {
    RatVec v{1, 0};
    for (const auto& x : frak_c(lat)) v.push_back(x);
    v.push_back(0);
    v.push_back(q);
    return v;
  }
  bool is_standard() const { return order == 1; }
};

inline std::vector<Cusp> enumerate_cusp_candidates(const EvenLattice& lat, i64 budget = 1000000) {
  DiscriminantGroup g(lat);
  std::vector<Cusp> out;
  std::vector<Vec> seen;
  g.for_each_element(
      [&](const Vec& w) {
        if (g.q_mod_1(w) != 0) return;
        Vec c = g.coordinates(w);
        Vec neg(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
        Vec cn = g.coordinates(neg);
        for (const auto& s : seen)
          if (s == c || s == cn) return;
        seen.push_back(c);
        out.push_back({w, lat.q_of_w(w), g.element_order(w)});
      },
      budget);
  return out;
}

// A_{sign c}(lambda, gamma): the Dirichlet coefficient of a general cusp, summing
// over d in L_0 + sign*c~ modulo gamma L_0. gamma may be negative.
inline std::complex<double> a_cusp_bruteforce(const EvenLattice& lat, const Cusp& c, int sign, const IndexVector& x,
                                              i64 gamma, bool primitive = true, i64 budget = kDefaultBudget) {
  if (gamma == 0) throw ValidationError("a_cusp_bruteforce: gamma must be nonzero");
  if (!is_integer(c.q)) throw ValidationError("cusp representative needs Q(c) integral");
  std::size_t n = lat.rank();
  i64 ag = gamma < 0 ? -gamma : gamma;
  std::string where = detail::context(x, "gamma=" + std::to_string(gamma));
  detail::check_budget(ag, n + 2, budget, where);
  i64 det = lat.det(), qc = num(c.q).convert_to<i64>();
  i64 modulus = det * ag;
  i64 wc_shift = lat.pairing_times_det(x.w(), c.w);
  std::vector<i64> cnt(static_cast<std::size_t>(modulus), 0);
  Vec u(n, 0);
  while (true) {
    Vec su = lat.gram().apply(u);
    i64 uwc = 0, uw = 0;
    for (std::size_t i = 0; i < n; ++i) {
      uwc += u[i] * c.w[i];
      uw += u[i] * x.w()[i];
    }
    i64 qd = lat.q_int(u) + sign * uwc + qc;  // Q(u + sign c)
    i64 g0 = ag;
    for (std::size_t i = 0; i < n; ++i) g0 = std::gcd(g0, su[i] + sign * c.w[i]);
    for (i64 d1 = 0; d1 < ag; ++d1)
      for (i64 d2 = 0; d2 < ag; ++d2) {
        i64 q0d = d1 * d2 - qd;
        if (q0d % ag) continue;
        if (primitive) {
          i64 delta = -q0d / gamma;
          if (std::gcd(std::gcd(std::gcd(g0, d1), d2), delta) != 1) continue;
        }
        i64 phase = det * (x.l() * d2 + x.m() * d1 - uw) - sign * wc_shift;
        if (gamma < 0) phase = -phase;
        ++cnt[static_cast<std::size_t>(mod(phase, modulus))];
      }
    std::size_t k = n;
    while (k > 0 && ++u[k - 1] == ag) u[--k] = 0;
    if (k == 0) break;
  }
  return detail::phase_sum(cnt);
}

// Cusp-term coefficient of E_{k,S,c} (sum over L_1 - c) or of E*_{k,S,c} (L_1 +- c,
// no primitivity), by truncating the Dirichlet series at gamma_max.
inline SeriesResult cusp_coefficient_series_at(const EvenLattice& lat, const Cusp& c, const IndexVector& x, int k,
                                               int gamma_max, SeriesVariant variant = SeriesVariant::e,
                                               i64 budget = kDefaultBudget) {
  check_weight(lat, k);
  if (x.q0() <= 0) throw ValidationError("cusp_coefficient_series_at needs Q_0 > 0, got " + x.str());
  SeriesResult r;
  r.gamma_max = gamma_max;
  double s = 0;
  for (i64 g = 1; g <= gamma_max; ++g) {
    double term;
    if (variant == SeriesVariant::e) {
      term = a_cusp_bruteforce(lat, c, -1, x, g, true, budget).real();
    } else {
      term = 0.5 * (a_cusp_bruteforce(lat, c, 1, x, g, false, budget).real() +
                    a_cusp_bruteforce(lat, c, -1, x, g, false, budget).real());
    }
    r.dirichlet.push_back(static_cast<i64>(std::llround(term)));
    s += term * std::pow(static_cast<double>(g), -k);
  }
  double pre = detail::prefactor(lat, x, k);
  if (variant == SeriesVariant::e_star) pre /= zeta_special(k).to_double();
  r.value = pre * s;
  r.tail_bound = std::abs(pre) * detail::tail_sum(gamma_max, static_cast<int>(lat.rank()), k);
  return r;
}

struct CuspWeight {
  Cusp cusp;
  std::vector<i64> residues;  // alpha mod N with alpha c* = +-c
  double weight = 0;
};

// E*_{k,S,c} = sum over candidates c* of weight(c*) E_{k,S,c*}.
inline std::vector<CuspWeight> estar_relation_weights(const EvenLattice& lat, const Cusp& c, int k) {
  check_weight(lat, k);
  DiscriminantGroup g(lat);
  Vec target = g.coordinates(c.w);
  Vec neg(c.w.size());
  for (std::size_t i = 0; i < c.w.size(); ++i) neg[i] = -c.w[i];
  Vec target_neg = g.coordinates(neg);
  double zk = zeta_special(k).to_double();
  std::vector<CuspWeight> out;
  for (const Cusp& cs : enumerate_cusp_candidates(lat)) {
    CuspWeight cw{cs, {}, 0};
    i64 N = cs.order;
    for (i64 a = 1; a <= N; ++a) {
      Vec w(cs.w.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = a * cs.w[i];
      Vec co = g.coordinates(w);
      if (co == target || co == target_neg) cw.residues.push_back(a % N);
    }
    double s = 0;
    for (i64 r : cw.residues) {
      // alpha = r, r + N, ...; stop once the integral tail is below 1e-12
      double part = 0;
      for (i64 a = r == 0 ? N : r;; a += N) {
        part += std::pow(static_cast<double>(a), -k);
        double tail = std::pow(static_cast<double>(a), 1 - k) / (static_cast<double>(N) * (k - 1));
        if (tail < 1e-12 * zk) break;
      }
      s += part;
    }
    cw.weight = s / zk;
    out.push_back(std::move(cw));
  }
  return out;
}

}  // namespace orthocoeff
