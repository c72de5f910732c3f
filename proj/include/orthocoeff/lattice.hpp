#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "orthocoeff/matrix.hpp"

namespace orthocoeff {

struct GramDefect {
  std::size_t row;  // 0-based row of the offending entry
  std::string what;
};

inline std::optional<GramDefect> find_gram_defect(const IntMatrix& s) {
  std::size_t n = s.rows();
  if (n == 0) return GramDefect{0, "empty Gram matrix"};
  if (s.cols() != n) return GramDefect{0, "Gram matrix is not square"};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (s(i, j) != s(j, i))
        return GramDefect{i, "not symmetric: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") differs from its transpose"};
    if (s(i, i) % 2) return GramDefect{i, "not even: odd diagonal entry " + std::to_string(s(i, i))};
  }
  auto minors = leading_minors(s);
  for (std::size_t k = 0; k < n; ++k)
    if (k >= minors.size() || minors[k] <= 0)
      return GramDefect{k, "not positive definite: leading minor of size " + std::to_string(k + 1) + " is " +
                               (k < minors.size() ? minors[k].str() : std::string("0"))};
  return std::nullopt;
}

class EvenLattice {
 public:
  explicit EvenLattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (auto d = find_gram_defect(gram_))
      throw ValidationError("Gram row " + std::to_string(d->row + 1) + ": " + d->what);
    BigInt det = determinant(gram_);
    if (det > BigInt(1) << 40) throw ValidationError("determinant too large for this implementation");
    det_ = det.convert_to<i64>();
    auto inv = rational_inverse(gram_);
    adj_ = IntMatrix(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) adj_(i, j) = num(inv[i][j] * det_).convert_to<i64>();
    smith_ = smith_normal_form(gram_);
  }

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  i64 det() const { return det_; }
  // det(S) * S^{-1}, integral.
  const IntMatrix& adjugate() const { return adj_; }
  const SmithForm& smith() const { return smith_; }

  i64 q_int(std::span<const i64> v) const { return quadratic_value(gram_, v); }

  // Q(S^{-1} w) = w^T S^{-1} w / 2.
  Rational q_of_w(std::span<const i64> w) const {
    Vec a = adj_.apply(w);
    BigInt s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += BigInt(w[i]) * a[i];
    return Rational(s, BigInt(2 * det_));
  }

  RatVec mu_of_w(std::span<const i64> w) const {
    Vec a = adj_.apply(w);
    RatVec mu;
    for (i64 x : a) mu.emplace_back(x, det_);
    return mu;
  }

  // Least N with N * S^{-1} w integral.
  i64 level_of_w(std::span<const i64> w) const {
    Vec a = adj_.apply(w);
    return det_ / std::gcd(det_, gcd(std::span<const i64>(a)));
  }

  // (S^{-1} w1, w2) scaled by det: w1^T adj w2.
  i64 pairing_times_det(std::span<const i64> w1, std::span<const i64> w2) const {
    Vec a = adj_.apply(w1);
    i64 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * w2[i];
    return s;
  }

  bool operator==(const EvenLattice& o) const { return gram_ == o.gram_; }

 private:
  IntMatrix gram_;
  i64 det_ = 1;
  IntMatrix adj_;
  SmithForm smith_;
};

// Text format: line 1 = n, then n rows of n integers.
inline EvenLattice read_gram(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return line;
    }
    throw ValidationError("line " + std::to_string(lineno + 1) + ": unexpected end of Gram file");
  };
  std::istringstream head(next_line());
  long long n = 0;
  if (!(head >> n) || n <= 0 || n > 64) throw ValidationError("line " + std::to_string(lineno) + ": bad rank");
  std::vector<int> row_line(static_cast<std::size_t>(n));
  IntMatrix s(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    std::istringstream row(next_line());
    row_line[static_cast<std::size_t>(i)] = lineno;
    for (long long j = 0; j < n; ++j) {
      long long x;
      if (!(row >> x))
        throw ValidationError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " integers");
      s(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = x;
    }
    std::string extra;
    if (row >> extra) throw ValidationError("line " + std::to_string(lineno) + ": too many entries");
  }
  if (auto d = find_gram_defect(s)) throw ValidationError("line " + std::to_string(row_line[d->row]) + ": " + d->what);
  return EvenLattice(s);
}

inline EvenLattice load_gram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open Gram file " + path);
  try {
    return read_gram(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

struct ExtendedGram {
  IntMatrix s0;
  IntMatrix s1;
  std::size_t n;
};

inline ExtendedGram extend(const EvenLattice& lat) {
  std::size_t n = lat.rank();
  ExtendedGram ext{IntMatrix(n + 2, n + 2), IntMatrix(n + 4, n + 4), n};
  ext.s0(0, n + 1) = ext.s0(n + 1, 0) = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ext.s0(i + 1, j + 1) = -lat.gram()(i, j);
  ext.s1(0, n + 3) = ext.s1(n + 3, 0) = 1;
  for (std::size_t i = 0; i < n + 2; ++i)
    for (std::size_t j = 0; j < n + 2; ++j) ext.s1(i + 1, j + 1) = ext.s0(i, j);
  return ext;
}

inline Rational q(const EvenLattice& lat, std::span<const Rational> v) { return quadratic_value(lat.gram(), v); }
inline Rational q0(const ExtendedGram& ext, std::span<const Rational> v) { return quadratic_value(ext.s0, v); }
inline Rational q1(const ExtendedGram& ext, std::span<const Rational> v) { return quadratic_value(ext.s1, v); }

// lambda = (l, mu, m) in L_0^# with mu = S^{-1} w.
class IndexVector {
 public:
  IndexVector() = default;
  IndexVector(const EvenLattice& lat, i64 l, Vec w, i64 m) : l_(l), w_(std::move(w)), m_(m) {
    if (w_.size() != lat.rank()) throw ValidationError("index vector has wrong length");
    q0_ = Rational(l_) * m_ - lat.q_of_w(w_);
    eps_ = std::gcd(std::gcd(l_, m_), gcd(std::span<const i64>(w_)));
    level_ = lat.level_of_w(w_);
  }

  i64 l() const { return l_; }
  const Vec& w() const { return w_; }
  i64 m() const { return m_; }
  const Rational& q0() const { return q0_; }
  i64 eps() const { return eps_; }
  i64 level() const { return level_; }

  bool is_zero() const { return eps_ == 0; }

  // S_0 lambda = (m, -w, l).
  Vec s0_image() const {
    Vec v{m_};
    for (i64 x : w_) v.push_back(-x);
    v.push_back(l_);
    return v;
  }

  std::string str() const {
    std::string s = "(" + std::to_string(l_) + ", [";
    for (std::size_t i = 0; i < w_.size(); ++i) s += (i ? "," : "") + std::to_string(w_[i]);
    return s + "], " + std::to_string(m_) + ")";
  }

  friend bool operator==(const IndexVector& a, const IndexVector& b) {
    return a.l_ == b.l_ && a.m_ == b.m_ && a.w_ == b.w_;
  }
  friend bool operator<(const IndexVector& a, const IndexVector& b) {
    return std::tie(a.l_, a.w_, a.m_) < std::tie(b.l_, b.w_, b.m_);
  }

 private:
  i64 l_ = 0;
  Vec w_;
  i64 m_ = 0;
  Rational q0_;
  i64 eps_ = 0;
  i64 level_ = 1;
};

inline IndexVector index_vector(const EvenLattice& lat, i64 l, Vec w, i64 m) {
  return IndexVector(lat, l, std::move(w), m);
}

inline bool in_closed_cone(const IndexVector& x) { return x.q0() >= 0 && x.l() >= 0 && x.m() >= 0; }
inline bool in_open_cone(const IndexVector& x) { return x.q0() > 0 && x.l() > 0; }
inline bool on_boundary(const IndexVector& x) { return !x.is_zero() && in_closed_cone(x) && x.q0() == 0; }

// lambda / d as an element of L_0^#, if it is one.
inline std::optional<IndexVector> divide(const EvenLattice& lat, const IndexVector& x, i64 d) {
  if (x.l() % d || x.m() % d) return std::nullopt;
  Vec w = x.w();
  for (i64& c : w) {
    if (c % d) return std::nullopt;
    c /= d;
  }
  return IndexVector(lat, x.l() / d, std::move(w), x.m() / d);
}

// lambda / d lies in L_0 (mu / d integral).
inline bool divisible_in_l0(const EvenLattice& lat, const IndexVector& x, i64 d) {
  if (x.l() % d || x.m() % d) return false;
  for (i64 c : lat.adjugate().apply(x.w()))
    if (c % (d * lat.det())) return false;
  return true;
}

struct IsotropicVector {
  i64 delta;
  Vec d;
  i64 gamma;

  Vec as_vector() const {
    Vec v{delta};
    v.insert(v.end(), d.begin(), d.end());
    v.push_back(gamma);
    return v;
  }
  bool isotropic(const ExtendedGram& ext) const {
    return gamma * delta + quadratic_value(ext.s0, std::span<const i64>(d)) == 0;
  }
};

class DiscriminantGroup {
 public:
  explicit DiscriminantGroup(const EvenLattice& lat)
      : det_(lat.det()), adj_(lat.adjugate()), smith_(lat.smith()) {
    for (std::size_t i = 0; i < smith_.diagonal.size(); ++i) {
      if (smith_.diagonal[i] == 1) continue;
      positions_.push_back(i);
      orders_.push_back(smith_.diagonal[i]);
      Vec g(lat.rank());
      for (std::size_t r = 0; r < lat.rank(); ++r) g[r] = smith_.left_inverse(r, i);
      generators_.push_back(g);
    }
  }

  const Vec& orders() const { return orders_; }
  // Representatives w = S mu of the cyclic generators.
  const std::vector<Vec>& generators() const { return generators_; }
  i64 order() const {
    i64 o = 1;
    for (i64 d : orders_) o *= d;
    return o;
  }

  Vec coordinates(std::span<const i64> w) const {
    Vec y = smith_.left.apply(w), c;
    for (std::size_t k = 0; k < positions_.size(); ++k) c.push_back(mod(y[positions_[k]], orders_[k]));
    return c;
  }

  Vec element(std::span<const i64> coords) const {
    Vec w(adj_.rows(), 0);
    for (std::size_t k = 0; k < coords.size(); ++k)
      for (std::size_t r = 0; r < w.size(); ++r) w[r] += coords[k] * generators_[k][r];
    return w;
  }

  Rational q_mod_1(std::span<const i64> w) const {
    Vec a = adj_.apply(w);
    BigInt s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += BigInt(w[i]) * a[i];
    Rational x(s, BigInt(2 * det_));
    BigInt fl = num(x) / den(x);
    if (x < 0 && fl * den(x) != num(x)) fl -= 1;
    return x - Rational(fl);
  }

  i64 element_order(std::span<const i64> w) const {
    Vec a = adj_.apply(w);
    return det_ / std::gcd(det_, gcd(std::span<const i64>(a)));
  }

  template <class F>
  void for_each_element(F&& f, i64 budget = 1000000) const {
    if (order() > budget)
      throw BudgetExceeded("discriminant group of order " + std::to_string(order()) + " exceeds budget");
    Vec c(orders_.size(), 0);
    while (true) {
      f(element(c));
      std::size_t k = 0;
      while (k < c.size() && ++c[k] == orders_[k]) c[k++] = 0;
      if (k == c.size()) return;
    }
  }

  // Enumerates the p-primary subgroup through its Smith coordinates.
  template <class F>
  void for_each_p_primary(i64 p, F&& f) const {
    Vec scale, top;
    for (i64 d : orders_) {
      i64 pa = 1;
      while (d % p == 0) {
        d /= p;
        pa *= p;
      }
      scale.push_back(d);
      top.push_back(pa);
    }
    Vec c(orders_.size(), 0);
    while (true) {
      Vec coords(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) coords[k] = c[k] * scale[k];
      f(element(coords));
      std::size_t k = 0;
      while (k < c.size() && ++c[k] == top[k]) c[k++] = 0;
      if (k == c.size()) return;
    }
  }

 private:
  i64 det_;
  IntMatrix adj_;
  SmithForm smith_;
  std::vector<std::size_t> positions_;
  Vec orders_;
  std::vector<Vec> generators_;
};

inline DiscriminantGroup discriminant_group(const EvenLattice& lat) { return DiscriminantGroup(lat); }

struct MaximalityWitness {
  Vec w;  // S mu of the offending coset
  i64 order;
  Rational q;
};

inline std::optional<MaximalityWitness> maximality_witness(const EvenLattice& lat, i64 p) {
  if (lat.det() % p) return std::nullopt;
  DiscriminantGroup g(lat);
  std::optional<MaximalityWitness> found;
  g.for_each_p_primary(p, [&](const Vec& w) {
    if (found) return;
    i64 o = g.element_order(w);
    if (o == 1) return;
    if (g.q_mod_1(w) == 0) found = MaximalityWitness{w, o, lat.q_of_w(w)};
  });
  return found;
}

inline bool is_maximal_at(const EvenLattice& lat, i64 p) { return !maximality_witness(lat, p).has_value(); }

inline bool is_maximal(const EvenLattice& lat) {
  for (i64 p : prime_divisors(lat.det()))
    if (!is_maximal_at(lat, p)) return false;
  return true;
}

enum class NormalizeKind { identity, swap, translate };

struct Normalized {
  IndexVector lambda;
  NormalizeKind kind;
  Vec u;  // translation vector for NormalizeKind::translate
};

inline int nu_lambda(const IndexVector& x, i64 p) { return valuation(x.eps(), p); }

// K_u: (l, mu, m) -> (l, mu + l u, m + (u, mu) + Q(u) l).
inline IndexVector translate_index(const EvenLattice& lat, const IndexVector& x, std::span<const i64> u) {
  Vec su = lat.gram().apply(u);
  Vec w = x.w();
  i64 uw = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    uw += u[i] * x.w()[i];
    w[i] += x.l() * su[i];
  }
  return IndexVector(lat, x.l(), std::move(w), x.m() + uw + lat.q_int(u) * x.l());
}

inline IndexVector swap_index(const EvenLattice& lat, const IndexVector& x) {
  return IndexVector(lat, x.m(), x.w(), x.l());
}

inline bool is_normalized_at(const IndexVector& x, i64 p) {
  i64 pv = ipow64(p, nu_lambda(x, p));
  return (x.m() / pv) % p != 0;
}

inline Normalized normalize_at_p(const EvenLattice& lat, const IndexVector& x, i64 p) {
  if (x.is_zero()) throw ValidationError("normalize_at_p: lambda must be nonzero");
  i64 pv = ipow64(p, nu_lambda(x, p));
  if ((x.m() / pv) % p) return {x, NormalizeKind::identity, {}};
  if ((x.l() / pv) % p) return {swap_index(lat, x), NormalizeKind::swap, {}};
  std::size_t n = lat.rank();
  Vec u(n, 0);
  while (true) {
    std::size_t k = n;
    while (k > 0 && ++u[k - 1] == p) u[--k] = 0;
    if (k == 0) break;
    IndexVector y = translate_index(lat, x, u);
    if ((y.m() / pv) % p) return {y, NormalizeKind::translate, u};
  }
  throw AssertionFailure("normalize_at_p: no translation found for " + x.str() + " at p=" + std::to_string(p));
}

inline bool group_membership(const ExtendedGram& ext, const IntMatrix& m) {
  return m.rows() == ext.s1.rows() && m.cols() == ext.s1.cols() && m.transpose() * ext.s1 * m == ext.s1;
}

inline IntMatrix make_translation(const ExtendedGram& ext, std::span<const i64> lambda) {
  std::size_t n2 = ext.s0.rows();
  if (lambda.size() != n2) throw ValidationError("translation vector has wrong length");
  IntMatrix t = IntMatrix::identity(n2 + 2);
  Vec s0l = ext.s0.apply(lambda);
  for (std::size_t j = 0; j < n2; ++j) {
    t(0, j + 1) = -s0l[j];
    t(j + 1, n2 + 1) = lambda[j];
  }
  t(0, n2 + 1) = -quadratic_value(ext.s0, lambda);
  return t;
}

inline IntMatrix make_rotation(const ExtendedGram& ext, const IntMatrix& k) {
  if (k.rows() != ext.s0.rows() || k.cols() != ext.s0.cols() || !(k.transpose() * ext.s0 * k == ext.s0))
    throw ValidationError("make_rotation: K is not orthogonal for S_0");
  std::size_t n2 = ext.s0.rows();
  IntMatrix r = IntMatrix::identity(n2 + 2);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) r(i + 1, j + 1) = k(i, j);
  return r;
}

inline IntMatrix make_inversion(const ExtendedGram& ext) {
  std::size_t d = ext.s1.rows();
  IntMatrix j(d, d);
  j(0, d - 1) = j(d - 1, 0) = -1;
  j(1, d - 2) = j(d - 2, 1) = -1;
  for (std::size_t i = 2; i + 2 < d; ++i) j(i, i) = 1;
  return j;
}

// J T_lambda J, unipotent on the opposite side.
inline IntMatrix make_lower_translation(const ExtendedGram& ext, std::span<const i64> lambda) {
  IntMatrix j = make_inversion(ext);
  return j * make_translation(ext, lambda) * j;
}

// The S_0-orthogonal matrices behind normalize_at_p.
inline IntMatrix swap_matrix(const ExtendedGram& ext) {
  std::size_t d = ext.s0.rows();
  IntMatrix v = IntMatrix::identity(d);
  v(0, 0) = v(d - 1, d - 1) = 0;
  v(0, d - 1) = v(d - 1, 0) = 1;
  return v;
}

inline IntMatrix translation_matrix(const EvenLattice& lat, std::span<const i64> u) {
  std::size_t n = lat.rank();
  IntMatrix k = IntMatrix::identity(n + 2);
  Vec su = lat.gram().apply(u);
  for (std::size_t i = 0; i < n; ++i) {
    k(i + 1, 0) = u[i];
    k(n + 1, i + 1) = su[i];
  }
  k(n + 1, 0) = lat.q_int(u);
  return k;
}

}  // namespace orthocoeff
