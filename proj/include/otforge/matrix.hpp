// SPDX-License-Identifier: Apache-2.0
//
// Dense exact matrices and the fraction-free linear algebra the pipeline
// needs: Bareiss determinants, Faddeev-LeVerrier characteristic polynomials,
// adjugate inverses, and Gaussian elimination over Q.
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"
#include "otforge/poly.hpp"

namespace otforge {

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : r_(rows), c_(cols), d_(rows * cols, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }

  T& at(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

  bool operator==(const Mat&) const = default;

  Mat transpose() const {
    Mat m(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error("matrix shape mismatch");
    Mat m = a;
    for (std::size_t i = 0; i < m.d_.size(); ++i) m.d_[i] += b.d_[i];
    return m;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error("matrix shape mismatch");
    Mat m = a;
    for (std::size_t i = 0; i < m.d_.size(); ++i) m.d_[i] -= b.d_[i];
    return m;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw Error("matrix shape mismatch");
    Mat m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& f = a.at(i, k);
        if (f == T(0)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) m.at(i, j) += f * b.at(k, j);
      }
    return m;
  }
  friend Mat operator*(const T& s, const Mat& a) {
    Mat m = a;
    for (auto& v : m.d_) v *= s;
    return m;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

using ZMat = Mat<Int>;
using QMat = Mat<Rat>;

inline QMat to_rational(const ZMat& a) {
  QMat m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = Rat(a.at(i, j));
  return m;
}

// Fraction-free determinant (Bareiss). All intermediate divisions are exact.
inline Int det_bareiss(ZMat a) {
  if (!a.is_square()) throw Error("determinant of a non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return Int(1);
  Int prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      std::size_t swap_row = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) {
          swap_row = i;
          break;
        }
      if (swap_row == k) return Int(0);
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a.at(k, j), a.at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a.at(i, j) = std::move(v);
      }
    prev = a.at(k, k);
  }
  return sign < 0 ? Int(-a.at(n - 1, n - 1)) : a.at(n - 1, n - 1);
}

inline Int trace(const ZMat& a) {
  Int t(0);
  for (std::size_t i = 0; i < a.rows(); ++i) t += a.at(i, i);
  return t;
}

// Characteristic polynomial det(tI - A), monic, by Faddeev-LeVerrier; the
// divisions by the step index are exact over Z.
inline IntPoly char_poly(const ZMat& a) {
  if (!a.is_square()) throw Error("characteristic polynomial of a non-square matrix");
  std::size_t n = a.rows();
  std::vector<Int> c(n + 1, Int(0));
  c[n] = 1;
  if (n == 0) return IntPoly(std::move(c));
  ZMat mk = a;
  c[n - 1] = -trace(mk);
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) mk.at(i, i) += c[n - k + 1];
    mk = a * mk;
    Int t = trace(mk);
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = -t;
  }
  return IntPoly(std::move(c));
}

// Horner evaluation of p at a square matrix.
inline ZMat poly_at(const IntPoly& p, const ZMat& m) {
  if (!m.is_square()) throw Error("poly_at requires a square matrix");
  std::size_t n = m.rows();
  ZMat acc(n, n);
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * m;
    Int ci = p.coeff(static_cast<std::size_t>(i));
    for (std::size_t d = 0; d < n; ++d) acc.at(d, d) += ci;
  }
  return acc;
}

// Adjugate via the characteristic polynomial: with chi(t) = t^n + c_{n-1}
// t^{n-1} + ... + c_0, adj(A) = (-1)^{n+1} (A^{n-1} + c_{n-1} A^{n-2} + ... +
// c_1 I), so A * adj(A) = det(A) I holds exactly.
inline ZMat adjugate(const ZMat& a) {
  if (!a.is_square()) throw Error("adjugate of a non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return a;
  IntPoly chi = char_poly(a);
  ZMat acc(n, n);
  for (std::size_t k = n; k >= 1; --k) {
    acc = acc * a;
    Int ck = chi.coeff(k);
    for (std::size_t d = 0; d < n; ++d) acc.at(d, d) += ck;
  }
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc.at(i, j) = -acc.at(i, j);
  }
  return acc;
}

// Integer inverse, available exactly when det = +-1.
inline std::optional<ZMat> inverse_unimodular(const ZMat& a) {
  Int d = det_bareiss(a);
  if (d != 1 && d != -1) return std::nullopt;
  ZMat adj = adjugate(a);
  if (d == -1) {
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) adj.at(i, j) = -adj.at(i, j);
  }
  return adj;
}

// Companion matrix of a monic polynomial: ones on the subdiagonal, negated
// coefficients down the last column; char_poly(companion(p)) = p.
inline ZMat companion(const IntPoly& p) {
  if (!p.is_monic() || p.degree() < 1)
    throw Error("companion matrix requires a monic polynomial of degree >= 1");
  std::size_t n = static_cast<std::size_t>(p.degree());
  ZMat m(n, n);
  for (std::size_t i = 1; i < n; ++i) m.at(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) m.at(i, n - 1) = -p.coeff(i);
  return m;
}

// Reduced row echelon form in place; returns the pivot column list.
inline std::vector<std::size_t> rref(QMat& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a.at(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(row, j), a.at(p, j));
    Rat inv = Rat(1) / a.at(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a.at(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a.at(i, col) == 0) continue;
      Rat f = a.at(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a.at(i, j) -= f * a.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank_q(QMat a) { return rref(a).size(); }

// Basis of the right kernel of a (each entry a column vector).
inline std::vector<std::vector<Rat>> kernel_q(QMat a) {
  std::vector<std::size_t> pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(a.cols(), Rat(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a.at(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves A x = b for square nonsingular A over Q; nullopt when singular.
inline std::optional<std::vector<Rat>> solve_q(QMat a, std::vector<Rat> b) {
  if (!a.is_square() || a.rows() != b.size())
    throw Error("solve_q shape mismatch");
  std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a.at(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      std::swap(b[k], b[p]);
    }
    Rat inv = Rat(1) / a.at(k, k);
    for (std::size_t j = k; j < n; ++j) a.at(k, j) *= inv;
    b[k] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a.at(i, k) == 0) continue;
      Rat f = a.at(i, k);
      for (std::size_t j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
      b[i] -= f * b[k];
    }
  }
  return b;
}

}  // namespace otforge
