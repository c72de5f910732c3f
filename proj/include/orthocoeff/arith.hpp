#pragma once

#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "orthocoeff/numeric.hpp"

namespace orthocoeff {

namespace detail {

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class BernoulliCache {
 public:
  Rational get(int k) {
    {
      std::shared_lock lock(mutex_);
      if (k < static_cast<int>(values_.size())) return values_[k];
    }
    std::unique_lock lock(mutex_);
    while (static_cast<int>(values_.size()) <= k) {
      int m = static_cast<int>(values_.size());
      if (m == 0) {
        values_.push_back(1);
        continue;
      }
      Rational s = 0;
      for (int j = 0; j < m; ++j) s += Rational(binomial(m + 1, j)) * values_[j];
      values_.push_back(-s / (m + 1));
    }
    return values_[k];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<Rational> values_;
};

inline BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

}  // namespace detail

// B_k with B_1 = -1/2.
inline Rational bernoulli(int k) {
  if (k < 0) throw ValidationError("bernoulli: negative index");
  return detail::bernoulli_cache().get(k);
}

inline Rational bernoulli_polynomial(int m, const Rational& x) {
  Rational s = 0;
  for (int j = 0; j <= m; ++j) s += Rational(detail::binomial(m, j)) * bernoulli(j) * rpow(x, m - j);
  return s;
}

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Jacobi symbol (a/n) for odd positive n.
inline int jacobi(i64 a, i64 n) {
  a = mod(a, n);
  int r = 1;
  while (a) {
    while (a % 2 == 0) {
      a /= 2;
      i64 t = n % 8;
      if (t == 3 || t == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

inline int kronecker(i64 d, i64 m) {
  if (m == 0) return (d == 1 || d == -1) ? 1 : 0;
  int r = 1;
  if (m < 0) {
    m = -m;
    if (d < 0) r = -r;
  }
  while (m % 2 == 0) {
    if (d % 2 == 0) return 0;
    i64 t = mod(d, 8);
    if (t == 3 || t == 5) r = -r;
    m /= 2;
  }
  if (m == 1) return r;
  return r * jacobi(d, m);
}

struct FundamentalDiscriminant {
  i64 fund;
  i64 f0;
};

inline FundamentalDiscriminant fundamental_discriminant(i64 d) {
  if (d == 0 || (mod(d, 4) != 0 && mod(d, 4) != 1))
    throw ValidationError("fundamental_discriminant: " + std::to_string(d) + " is not 0 or 1 mod 4");
  i64 square = 1, core = d < 0 ? -1 : 1;
  for (auto [p, e] : factorize(d)) {
    square *= ipow64(p, e / 2);
    if (e % 2) core *= p;
  }
  if (mod(core, 4) == 1) return {core, square};
  return {4 * core, square / 2};
}

// The real character m -> (D/m) together with its primitive core.
class KroneckerChar {
 public:
  explicit KroneckerChar(i64 d) : d_(d) {
    auto fd = fundamental_discriminant(d);
    fund_ = fd.fund;
    f0_ = fd.f0;
  }
  i64 D() const { return d_; }
  i64 fund() const { return fund_; }
  i64 f0() const { return f0_; }
  int operator()(i64 m) const { return kronecker(d_, m); }
  int primitive(i64 m) const { return kronecker(fund_, m); }
  // 0 for even characters, 1 for odd ones.
  int parity() const { return fund_ < 0 ? 1 : 0; }
  KroneckerChar primitive_char() const { return KroneckerChar(fund_); }

 private:
  i64 d_, fund_, f0_;
};

// B_{m,chi} for the primitive character attached to chi.fund().
inline Rational generalized_bernoulli(int m, const KroneckerChar& chi) {
  i64 f = chi.fund() < 0 ? -chi.fund() : chi.fund();
  Rational s = 0;
  for (i64 a = 1; a <= f; ++a) {
    int c = chi.primitive(a);
    if (c) s += c * bernoulli_polynomial(m, Rational(a, f));
  }
  return s * rpow(Rational(f), m - 1);
}

inline int mobius(i64 n) {
  int r = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline Rational sigma(int s, i64 n) {
  Rational r = 0;
  for (i64 d : divisors(n)) r += rpow(Rational(d), s);
  return r;
}

inline Rational sigma_chi(int s, const KroneckerChar& chi, i64 n) {
  Rational r = 0;
  for (i64 d : divisors(n))
    if (int c = chi(d)) r += c * rpow(Rational(d), s);
  return r;
}

}  // namespace orthocoeff
