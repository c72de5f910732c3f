#pragma once

#include <cstddef>
#include <cstdlib>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "orthocoeff/numeric.hpp"

namespace orthocoeff {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, i64 fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  IntMatrix(std::initializer_list<std::initializer_list<i64>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& row : init) {
      if (row.size() != cols_) throw ValidationError("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  i64& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  i64 operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const i64> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vec apply(std::span<const i64> v) const {
    if (v.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
    Vec r(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      i64 s = 0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        i64 x = a(i, k);
        if (!x) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<i64> data_;
};

using RatVec = std::vector<Rational>;

inline Rational quadratic_value(const IntMatrix& g, std::span<const Rational> v) {
  if (v.size() != g.rows()) throw ValidationError("quadratic form dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (g(i, j)) s += v[i] * g(i, j) * v[j];
  }
  return s / 2;
}

inline i64 quadratic_value(const IntMatrix& g, std::span<const i64> v) {
  i64 s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    for (std::size_t j = 0; j < v.size(); ++j) s += v[i] * g(i, j) * v[j];
  }
  return s / 2;
}

// Fraction-free elimination without pivoting. The k-th returned entry is the
// leading principal minor of size k+1; elimination stops at the first zero.
inline std::vector<BigInt> leading_minors(const IntMatrix& a) {
  std::size_t n = a.rows();
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
  std::vector<BigInt> minors;
  BigInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    minors.push_back(m[k][k]);
    if (m[k][k] == 0) break;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return minors;
}

inline BigInt determinant(const IntMatrix& a) {
  std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Exact inverse over Q; throws on singular input.
inline std::vector<RatVec> rational_inverse(const IntMatrix& a) {
  std::size_t n = a.rows();
  std::vector<RatVec> m(n, RatVec(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
    m[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && m[r][c] == 0) ++r;
    if (r == n) throw ValidationError("singular matrix");
    std::swap(m[c], m[r]);
    Rational piv = m[c][c];
    for (auto& x : m[c]) x /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  std::vector<RatVec> inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  auto inv = rational_inverse(a);
  IntMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!is_integer(inv[i][j])) throw AssertionFailure("matrix is not unimodular");
      r(i, j) = num(inv[i][j]).convert_to<i64>();
    }
  return r;
}

struct SmithForm {
  Vec diagonal;          // d_1 | d_2 | ... | d_n, all positive for nonsingular input
  IntMatrix left;        // U with U * A * V = diag
  IntMatrix right;       // V
  IntMatrix left_inverse;
};

inline SmithForm smith_normal_form(const IntMatrix& input) {
  std::size_t n = input.rows();
  if (input.cols() != n) throw ValidationError("Smith form implemented for square matrices");
  IntMatrix a = input, u = IntMatrix::identity(n), v = IntMatrix::identity(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a(i, c), a(j, c));
      std::swap(u(i, c), u(j, c));
    }
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(a(r, i), a(r, j));
      std::swap(v(r, i), v(r, j));
    }
  };
  // row_i += q * row_j
  auto add_row = [&](std::size_t i, std::size_t j, i64 q) {
    for (std::size_t c = 0; c < n; ++c) {
      a(i, c) += q * a(j, c);
      u(i, c) += q * u(j, c);
    }
  };
  auto add_col = [&](std::size_t i, std::size_t j, i64 q) {
    for (std::size_t r = 0; r < n; ++r) {
      a(r, i) += q * a(r, j);
      v(r, i) += q * v(r, j);
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a(i, j) && (pi == n || std::abs(a(i, j)) < std::abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == n) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (a(i, t)) add_row(i, t, -(a(i, t) / a(t, t)));
        if (a(i, t)) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j)) add_col(j, t, -(a(t, j) / a(t, t)));
        if (a(t, j)) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t)) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) {
        a(t, c) = -a(t, c);
        u(t, c) = -u(t, c);
      }
    }
  }
  SmithForm s;
  for (std::size_t i = 0; i < n; ++i) s.diagonal.push_back(a(i, i));
  s.left = u;
  s.right = v;
  s.left_inverse = unimodular_inverse(u);
  return s;
}

}  // namespace orthocoeff
