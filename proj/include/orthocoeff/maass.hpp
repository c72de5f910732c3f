#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

#include "orthocoeff/eisenstein.hpp"

namespace orthocoeff {

namespace detail {

template <class V>
V from_rational(const Rational& r) {
  if constexpr (std::is_same_v<V, double>) {
    return to_double(r);
  } else {
    return V(r);
  }
}

}  // namespace detail

// a(lambda) - sum over d | gcd(S_0 lambda) of d^(k-1) a(lm/d^2, mu/d, 1).
template <class Coeff>
auto maass_defect(const EvenLattice& lat, Coeff&& a, const IndexVector& x, int k) {
  using V = decltype(a(x));
  if (x.is_zero() || !in_closed_cone(x)) throw ValidationError("maass_defect: lambda must be nonzero in the closed cone");
  V defect = a(x);
  for (i64 d : divisors(x.eps())) {
    Vec w = x.w();
    for (i64& c : w) c /= d;
    IndexVector y(lat, x.l() / d * (x.m() / d), std::move(w), 1);
    defect -= detail::from_rational<V>(rpow(Rational(d), k - 1)) * a(y);
  }
  return defect;
}

// a(l, mu, p^t m) - a(p^t l, mu, m) - p^(k-1) a(lambda / p), with p not dividing m
// and a taken as 0 off L_0^#.
template <class Coeff>
auto local_maass_defect(const EvenLattice& lat, Coeff&& a, const IndexVector& x, i64 p, int k) {
  using V = decltype(a(x));
  int t = valuation(x.m(), p);
  if (x.m() == 0 || t < 1) throw ValidationError("local_maass_defect: p must divide m, lambda=" + x.str());
  i64 pt = ipow64(p, t);
  V defect = a(x) - a(IndexVector(lat, pt * x.l(), x.w(), x.m() / pt));
  if (auto y = divide(lat, x, p)) defect -= detail::from_rational<V>(rpow(Rational(p), k - 1)) * a(*y);
  return defect;
}

struct Defect {
  std::optional<Rational> exact;
  double numeric = 0;
  double scale = 0;  // largest magnitude among the terms, for relative tolerance
  bool asserted = true;
  bool ok = true;
};

struct LocalDefect {
  i64 p;
  int t;
  Defect defect;
};

struct MaassEntry {
  IndexVector lambda;
  Defect global;
  std::vector<LocalDefect> local;
};

struct PrimeVerdict {
  bool maximal = true;
  bool asserted = true;
  bool ok = true;
  int tested = 0;
};

struct MaassReport {
  std::string lattice_id;
  int k = 0;
  std::vector<MaassEntry> tested;
  std::map<i64, PrimeVerdict> per_prime;
  bool overall = true;
};

// Exact-or-numeric coefficient value used by verify_maass.
struct CoefficientValue {
  std::optional<Rational> exact;
  double numeric = 0;

  friend CoefficientValue operator-(const CoefficientValue& a, const CoefficientValue& b) {
    CoefficientValue r;
    if (a.exact && b.exact) r.exact = *a.exact - *b.exact;
    r.numeric = a.numeric - b.numeric;
    return r;
  }
  friend CoefficientValue operator*(const CoefficientValue& a, const CoefficientValue& b) {
    CoefficientValue r;
    if (a.exact && b.exact) r.exact = *a.exact * *b.exact;
    r.numeric = a.numeric * b.numeric;
    return r;
  }
  CoefficientValue& operator-=(const CoefficientValue& b) { return *this = *this - b; }
};

namespace detail {

class CoefficientCache {
 public:
  CoefficientCache(const EvenLattice& lat, int k, i64 budget) : lat_(lat), k_(k), budget_(budget) {}

  const CoefficientRecord& get(const IndexVector& x) {
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return it->second;
    }
    CoefficientRecord rec = coefficient(lat_, x, k_, budget_);
    std::lock_guard lock(mutex_);
    return cache_.emplace(x, std::move(rec)).first->second;
  }

  CoefficientValue value(const IndexVector& x) {
    const auto& r = get(x);
    return {r.value_exact, r.value_float};
  }

 private:
  const EvenLattice& lat_;
  int k_;
  i64 budget_;
  std::mutex mutex_;
  std::map<IndexVector, CoefficientRecord> cache_;
};

inline Defect judge(const CoefficientValue& v, double scale, bool asserted, double tol) {
  Defect d;
  d.exact = v.exact;
  d.numeric = v.numeric;
  d.scale = scale;
  d.asserted = asserted;
  if (v.exact) {
    d.ok = *v.exact == 0;
  } else {
    d.ok = std::abs(v.numeric) <= tol * std::max(scale, 1.0);
  }
  return d;
}

}  // namespace detail

struct MaassOptions {
  double tolerance = 1e-6;  // relative, numeric defects only
  i64 budget = kDefaultBudget;
};

// Runs the global and local Maass defects over a grid of closed-cone vectors.
// Defects at primes where L_p is not maximal are computed and recorded but do
// not affect the verdict.
inline MaassReport verify_maass(const EvenLattice& lat, int k, const std::vector<IndexVector>& grid,
                                const MaassOptions& opt = {}) {
  check_weight(lat, k);
  detail::CoefficientCache cache(lat, k, opt.budget);
  MaassReport rep;
  rep.k = k;
  {
    std::ostringstream id;
    id << lat.gram();
    rep.lattice_id = id.str();
  }
  double largest = 0;
  auto a = [&](const IndexVector& y) {
    CoefficientValue v = cache.value(y);
    largest = std::max(largest, std::abs(v.numeric));
    return v;
  };
  auto to_value = [](const Rational& r) { return CoefficientValue{r, to_double(r)}; };
  for (const IndexVector& x : grid) {
    if (x.is_zero() || !in_closed_cone(x)) throw ValidationError("verify_maass: grid point outside the closed cone: " + x.str());
    MaassEntry e;
    e.lambda = x;
    // Global defect, written out so that the scalar d^(k-1) stays exact.
    largest = 0;
    CoefficientValue g = a(x);
    for (i64 d : divisors(x.eps())) {
      Vec w = x.w();
      for (i64& c : w) c /= d;
      g -= to_value(rpow(Rational(d), k - 1)) * a(IndexVector(lat, x.l() / d * (x.m() / d), std::move(w), 1));
    }
    bool global_asserted = true;
    for (i64 p : prime_divisors(x.eps() * (x.m() ? x.m() : 1)))
      if (!is_maximal_at(lat, p)) global_asserted = false;
    e.global = detail::judge(g, largest, global_asserted, opt.tolerance);
    if (x.m() != 0) {
      for (i64 p : prime_divisors(x.m())) {
        int t = valuation(x.m(), p);
        largest = 0;
        i64 pt = ipow64(p, t);
        CoefficientValue l = a(x) - a(IndexVector(lat, pt * x.l(), x.w(), x.m() / pt));
        if (auto y = divide(lat, x, p)) l -= to_value(rpow(Rational(p), k - 1)) * a(*y);
        bool maximal = is_maximal_at(lat, p);
        LocalDefect ld{p, t, detail::judge(l, largest, maximal, opt.tolerance)};
        auto& pv = rep.per_prime[p];
        pv.maximal = maximal;
        pv.asserted = maximal;
        pv.ok = pv.ok && ld.defect.ok;
        ++pv.tested;
        e.local.push_back(ld);
      }
    }
    rep.tested.push_back(std::move(e));
  }
  for (const auto& e : rep.tested) {
    if (e.global.asserted && !e.global.ok) rep.overall = false;
    for (const auto& l : e.local)
      if (l.defect.asserted && !l.defect.ok) rep.overall = false;
  }
  return rep;
}

}  // namespace orthocoeff
