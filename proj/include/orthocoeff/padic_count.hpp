#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "orthocoeff/matrix.hpp"

namespace orthocoeff {

namespace detail {

class CongruenceCounter {
 public:
  CongruenceCounter(const IntMatrix& gram, i64 p) : s_(gram), p_(p), n_(gram.rows()), odd_(odd_data(gram, p)) {}

  BigInt count(i64 c, Vec b, i64 s, int j) const {
    if (j == 0) return 1;
    i64 modulus = ipow64(p_, j);
    c = mod(c, modulus);
    s = mod(s, modulus);
    bool b_unit = false;
    for (i64& x : b) {
      x = mod(x, modulus);
      if (x % p_) b_unit = true;
    }
    if (s % p_ == 0) {
      if (b_unit) return ipow(BigInt(p_), static_cast<unsigned>(j * (static_cast<int>(n_) - 1)));
      if (c % p_) return 0;
      for (i64& x : b) x /= p_;
      return ipow(BigInt(p_), static_cast<unsigned>(n_)) * count(c / p_, std::move(b), s / p_, j - 1);
    }
    if (odd_) return count_nondegenerate(c, b, s, j, modulus);
    // s is a unit: lift each root x mod p to v = x + p y.
    BigInt total = 0;
    Vec x(n_, 0);
    i64 sub = modulus / p_;
    while (true) {
      __int128 f = c;
      for (std::size_t i = 0; i < n_; ++i) f += static_cast<__int128>(b[i]) * x[i];
      f += static_cast<__int128>(s) * quadratic_value(s_, std::span<const i64>(x));
      i64 fm = static_cast<i64>(f % modulus);
      if (fm < 0) fm += modulus;
      if (fm % p_ == 0) {
        Vec sx = s_.apply(x), b2(n_);
        for (std::size_t i = 0; i < n_; ++i) b2[i] = mod(b[i] + mulmod(s, sx[i], modulus), sub);
        total += count(fm / p_, std::move(b2), mulmod(s, p_, modulus), j - 1);
      }
      std::size_t k = 0;
      while (k < n_ && ++x[k] == p_) x[k++] = 0;
      if (k == n_) break;
    }
    return total;
  }

 private:
  // Q(x) mod m without overflow.
  i64 q_mod(const Vec& x, i64 m) const {
    i64 r = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      r = mod(r + mulmod(mulmod(s_(i, i) / 2, x[i], m), x[i], m), m);
      for (std::size_t j = i + 1; j < n_; ++j) r = mod(r + mulmod(mulmod(s_(i, j), x[i], m), x[j], m), m);
    }
    return r;
  }

  // p odd, p not dividing det S, s a unit: shift x by -(s S)^-1 b, leaving s Q(y) = -c'.
  BigInt count_nondegenerate(i64 c, const Vec& b, i64 s, int j, i64 modulus) const {
    i64 sinv = inverse_mod(s, modulus);
    i64 dinv = inverse_mod(mod(odd_->det, modulus), modulus);
    Vec x0(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      i64 acc = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        acc = mod(acc + mulmod(mod(odd_->adj(i, k), modulus), b[k], modulus), modulus);
      }
      x0[i] = mod(-mulmod(mulmod(sinv, dinv, modulus), acc, modulus), modulus);
    }
    i64 c2 = c;
    for (std::size_t i = 0; i < n_; ++i) c2 = mod(c2 + mulmod(b[i], x0[i], modulus), modulus);
    c2 = mod(c2 + mulmod(s, q_mod(x0, modulus), modulus), modulus);
    return homogeneous(mod(-mulmod(c2, sinv, modulus), modulus), j);
  }

  // #{y mod p^j : Q(y) = a mod p^j} for Q nondegenerate mod p.
  BigInt homogeneous(i64 a, int j) const {
    if (j <= 0) return 1;
    bool zero = a % p_ == 0;
    BigInt nonsingular = odd_->residues[static_cast<std::size_t>(a % p_)] - (zero ? 1 : 0);
    BigInt total = nonsingular * ipow(BigInt(p_), static_cast<unsigned>((j - 1) * (static_cast<int>(n_) - 1)));
    if (zero) {
      if (j == 1) {
        total += 1;
      } else if (a % (p_ * p_) == 0) {
        total += ipow(BigInt(p_), static_cast<unsigned>(n_)) * homogeneous(a / (p_ * p_), j - 2);
      }
    }
    return total;
  }

  // For p odd and prime to det S: adjugate, det and the value distribution of Q mod p.
  struct OddPrimeData {
    IntMatrix adj;
    i64 det;
    std::vector<i64> residues;
  };

  // Memoized per (Gram, p); the residue scan costs p^n.
  static std::shared_ptr<const OddPrimeData> odd_data(const IntMatrix& gram, i64 p) {
    static std::mutex mutex;
    static std::map<std::pair<std::vector<i64>, i64>, std::shared_ptr<const OddPrimeData>> cache;
    std::size_t n = gram.rows();
    std::vector<i64> key;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) key.push_back(gram(i, j));
    {
      std::lock_guard lock(mutex);
      auto it = cache.find({key, p});
      if (it != cache.end()) return it->second;
    }
    std::shared_ptr<OddPrimeData> d;
    BigInt det = determinant(gram);
    if (p != 2 && det % p != 0) {
      d = std::make_shared<OddPrimeData>();
      d->det = det.convert_to<i64>();
      auto inv = rational_inverse(gram);
      d->adj = IntMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d->adj(i, j) = num(inv[i][j] * det).convert_to<i64>();
      d->residues.assign(static_cast<std::size_t>(p), 0);
      Vec x(n, 0);
      while (true) {
        ++d->residues[static_cast<std::size_t>(mod(quadratic_value(gram, std::span<const i64>(x)), p))];
        std::size_t k = 0;
        while (k < n && ++x[k] == p) x[k++] = 0;
        if (k == n) break;
      }
    }
    std::lock_guard lock(mutex);
    return cache.emplace(std::make_pair(key, p), d).first->second;
  }

  const IntMatrix& s_;
  i64 p_;
  std::size_t n_;
  std::shared_ptr<const OddPrimeData> odd_;
};

}  // namespace detail

// #{v in (Z/p^j)^n : c + b.v + s Q(v) = 0 mod p^j} by Hensel lifting.
inline BigInt count_quadratic_congruence(const IntMatrix& gram, i64 p, int j, i64 c, std::span<const i64> b,
                                         i64 s) {
  if (j < 0) throw ValidationError("negative exponent");
  if (ipow(BigInt(p), static_cast<unsigned>(j)) > BigInt(1) << 50)
    throw BudgetExceeded("modulus p^" + std::to_string(j) + " too large for p=" + std::to_string(p));
  return detail::CongruenceCounter(gram, p).count(c, Vec(b.begin(), b.end()), s, j);
}

}  // namespace orthocoeff
