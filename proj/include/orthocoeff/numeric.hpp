#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orthocoeff/errors.hpp"

namespace orthocoeff {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using i64 = std::int64_t;
using Vec = std::vector<i64>;

inline Rational make_rational(const BigInt& num, const BigInt& den = 1) {
  return Rational(num, den);
}

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

// "num/den" in lowest terms, sign on the numerator.
inline std::string to_string(const Rational& r) {
  return num(r).str() + "/" + den(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

inline BigInt ipow(BigInt base, unsigned e) {
  BigInt r = 1;
  while (e) {
    if (e & 1U) r *= base;
    base *= base;
    e >>= 1U;
  }
  return r;
}

inline i64 ipow64(i64 base, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Integer power with a negative exponent allowed.
inline Rational rpow(const Rational& base, int e) {
  if (e >= 0) {
    return Rational(ipow(num(base), static_cast<unsigned>(e)), ipow(den(base), static_cast<unsigned>(e)));
  }
  if (base == 0) throw ValidationError("zero raised to a negative power");
  return Rational(ipow(den(base), static_cast<unsigned>(-e)), ipow(num(base), static_cast<unsigned>(-e)));
}

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  __int128 r = static_cast<__int128>(a) * b % m;
  return static_cast<i64>(r < 0 ? r + m : r);
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 gcd(std::span<const i64> v) {
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, x);
  return g;
}

inline i64 lcm(i64 a, i64 b) { return std::lcm(a, b); }

// Inverse of a modulo m, assuming gcd(a, m) = 1.
inline i64 inverse_mod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    i64 q = g / a1;
    g -= q * a1;
    std::swap(g, a1);
    x -= q * x1;
    std::swap(x, x1);
  }
  return mod(x, m);
}

// p-adic valuation; valuation of 0 is reported as a large sentinel.
inline constexpr int kInfiniteValuation = 1 << 20;

inline int valuation(i64 x, i64 p) {
  if (x == 0) return kInfiniteValuation;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

inline int valuation(BigInt x, i64 p) {
  if (x == 0) return kInfiniteValuation;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

inline int valuation(const Rational& r, i64 p) {
  if (r == 0) return kInfiniteValuation;
  return valuation(num(r), p) - valuation(den(r), p);
}

struct PrimePower {
  i64 p;
  int e;
};

// Trial division; desk-scale inputs only.
inline std::vector<PrimePower> factorize(i64 n) {
  if (n < 0) n = -n;
  std::vector<PrimePower> f;
  if (n <= 1) return f;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

inline std::vector<PrimePower> factorize(BigInt n) {
  if (n < 0) n = -n;
  std::vector<PrimePower> f;
  if (n <= 1) return f;
  for (i64 p = 2; BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (p > 100000000) throw BudgetExceeded("factorization beyond trial-division range");
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) {
    if (n > BigInt(std::numeric_limits<i64>::max())) throw BudgetExceeded("prime factor too large");
    f.push_back({n.convert_to<i64>(), 1});
  }
  return f;
}

inline std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> ds;
  if (n < 0) n = -n;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    ds.push_back(d);
    if (d * d != n) ds.push_back(n / d);
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace orthocoeff
