#pragma once

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "orthocoeff/arith.hpp"

namespace orthocoeff {

// q * pi^(e/2) * sqrt(R) with R a squarefree positive integer. A rational radicand
// a/b is stored as sqrt(ab)/b, so a single squarefree integer suffices.
class SpecialValue {
 public:
  SpecialValue() : q_(0) {}
  SpecialValue(Rational q) : q_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  SpecialValue(Rational q, int e, BigInt r) : q_(std::move(q)), e_(e), r_(std::move(r)) { canonicalize(); }

  static SpecialValue pi_power(int e) { return SpecialValue(1, e, 1); }

  static SpecialValue sqrt_of(const Rational& x) {
    if (x <= 0) throw ValidationError("sqrt_of: radicand must be positive");
    return SpecialValue(Rational(1, den(x)), 0, num(x) * den(x));
  }

  const Rational& q() const { return q_; }
  int e() const { return e_; }
  const BigInt& R() const { return r_; }

  bool is_rational() const { return q_ == 0 || (e_ == 0 && r_ == 1); }

  Rational to_rational() const {
    if (!is_rational()) throw AssertionFailure("special value " + str() + " is not rational");
    return q_;
  }

  double to_double() const {
    return orthocoeff::to_double(q_) * std::pow(std::numbers::pi, e_ / 2.0) * std::sqrt(orthocoeff::to_double(r_));
  }

  SpecialValue inverse() const {
    if (q_ == 0) throw ValidationError("inverse of zero special value");
    // 1/sqrt(R) = sqrt(R)/R
    return SpecialValue(1 / (q_ * Rational(r_)), -e_, r_);
  }

  friend SpecialValue operator*(const SpecialValue& a, const SpecialValue& b) {
    if (a.q_ == 0 || b.q_ == 0) return SpecialValue();
    return SpecialValue(a.q_ * b.q_, a.e_ + b.e_, a.r_ * b.r_);
  }
  friend SpecialValue operator/(const SpecialValue& a, const SpecialValue& b) { return a * b.inverse(); }
  SpecialValue& operator*=(const SpecialValue& b) { return *this = *this * b; }
  SpecialValue& operator/=(const SpecialValue& b) { return *this = *this / b; }

  friend bool operator==(const SpecialValue& a, const SpecialValue& b) {
    return a.q_ == b.q_ && a.e_ == b.e_ && a.r_ == b.r_;
  }

  std::string str() const {
    std::string s = to_string(q_);
    if (e_) s += " * pi^(" + std::to_string(e_) + "/2)";
    if (r_ != 1) s += " * sqrt(" + r_.str() + ")";
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const SpecialValue& v) { return os << v.str(); }

 private:
  void canonicalize() {
    if (q_ == 0) {
      e_ = 0;
      r_ = 1;
      return;
    }
    if (r_ <= 0) throw ValidationError("special value radicand must be positive");
    BigInt free = 1, out = 1;
    for (auto [p, k] : factorize(r_)) {
      out *= ipow(BigInt(p), static_cast<unsigned>(k / 2));
      if (k % 2) free *= p;
    }
    q_ *= Rational(out);
    r_ = free;
  }

  Rational q_;
  int e_ = 0;
  BigInt r_ = 1;
};

inline SpecialValue zeta_special(int k) {
  if (k < 2 || k % 2) throw ValidationError("zeta_special: k must be even and >= 2, got " + std::to_string(k));
  Rational q = bernoulli(k) * Rational(ipow(BigInt(2), k - 1), factorial(k));
  if ((k / 2 + 1) % 2) q = -q;
  return SpecialValue(q, 2 * k, 1);
}

// Gamma(x) for x = two_x / 2 > 0.
inline SpecialValue gamma_special(int two_x) {
  if (two_x <= 0) throw ValidationError("gamma_special: argument must be positive");
  if (two_x % 2 == 0) return SpecialValue(Rational(factorial(two_x / 2 - 1)));
  int j = two_x / 2;  // x = j + 1/2
  return SpecialValue(Rational(factorial(2 * j), ipow(BigInt(4), j) * factorial(j)), 1, 1);
}

// L(m, chi_D) from the primitive value times the missing Euler factors.
inline SpecialValue l_special(int m, const KroneckerChar& chi) {
  if (m < 1) throw ValidationError("l_special: m must be positive");
  int delta = chi.parity();
  if ((m - delta) % 2)
    throw ValidationError("l_special: parity mismatch for D=" + std::to_string(chi.D()) + ", m=" +
                          std::to_string(m));
  i64 f = chi.fund() < 0 ? -chi.fund() : chi.fund();
  Rational q = Rational(ipow(BigInt(2), m - 1)) * rpow(Rational(f), -m) * generalized_bernoulli(m, chi) /
               Rational(factorial(m));
  if ((1 + (m - delta) / 2) % 2) q = -q;
  for (i64 p : prime_divisors(chi.D())) {
    if (f % p == 0) continue;
    q *= 1 - chi.primitive(p) * rpow(Rational(p), -m);
  }
  return SpecialValue(q, 2 * m, f);
}

}  // namespace orthocoeff
