// SPDX-License-Identifier: Apache-2.0
//
// Floating-point support for the eigenstructure assembly: arbitrary
// precision reals (GMP mpf), a small complex type over them, polynomial root
// finding by the Durand-Kerner iteration with deterministic rational seeds,
// and tolerance-based kernel extraction used for Jordan chains. Nothing here
// certifies anything on its own; every downstream claim is re-checked by an
// exact or residual-bounded test.

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"
#include "otforge/matrix.hpp"
#include "otforge/poly.hpp"

namespace otforge {

using Mpf = mpf_class;

struct CF {
  Mpf re, im;

  CF() : re(0), im(0) {}
  CF(Mpf r, Mpf i) : re(std::move(r)), im(std::move(i)) {}
  explicit CF(const Mpf& r) : re(r), im(0) {}
};

inline CF operator+(const CF& a, const CF& b) {
  return CF(a.re + b.re, a.im + b.im);
}
inline CF operator-(const CF& a, const CF& b) {
  return CF(a.re - b.re, a.im - b.im);
}
inline CF operator*(const CF& a, const CF& b) {
  return CF(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline CF operator/(const CF& a, const CF& b) {
  Mpf d = b.re * b.re + b.im * b.im;
  return CF((a.re * b.re + a.im * b.im) / d,
            (a.im * b.re - a.re * b.im) / d);
}
inline Mpf abs2(const CF& z) { return z.re * z.re + z.im * z.im; }

using CVec = std::vector<CF>;
using CMat = std::vector<std::vector<CF>>;
using FMat = Mat<Mpf>;

inline Mpf mpf_from_rat(const Rat& q, unsigned long prec) {
  Mpf v(0, prec);
  mpf_set_q(v.get_mpf_t(), q.get_mpq_t());
  return v;
}

// 2^-k at working precision.
inline Mpf mpf_eps(unsigned long prec, long k) {
  Mpf v(1, prec);
  mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), static_cast<unsigned long>(k));
  return v;
}

inline Mpf mpf_from_int(const Int& n, unsigned long prec) {
  Mpf v(0, prec);
  mpf_set_z(v.get_mpf_t(), n.get_mpz_t());
  return v;
}

inline CF horner(const IntPoly& p, const CF& z, unsigned long prec) {
  CF acc(Mpf(0, prec), Mpf(0, prec));
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * z;
    acc.re += mpf_from_int(c[i], prec);
  }
  return acc;
}

// All complex roots of a squarefree monic polynomial by the Durand-Kerner
// iteration from the classical seeds (0.4 + 0.9i)^k, followed by a few
// Newton steps per root. Deterministic for fixed precision.
inline CVec all_roots(const IntPoly& p, unsigned long prec) {
  if (p.degree() < 1) return {};
  if (p.leading() != 1) throw Error("root finding expects a monic polynomial");
  int d = p.degree();
  CF seed(Mpf(0, prec), Mpf(0, prec));
  mpf_set_d(seed.re.get_mpf_t(), 0.4);
  mpf_set_d(seed.im.get_mpf_t(), 0.9);
  CVec z(static_cast<std::size_t>(d));
  CF acc(Mpf(1, prec), Mpf(0, prec));
  for (int k = 0; k < d; ++k) {
    acc = acc * seed;
    z[static_cast<std::size_t>(k)] = acc;
  }
  Mpf tol = mpf_eps(prec, static_cast<long>(prec) - 16);
  Mpf tol2 = tol * tol;
  for (int iter = 0; iter < 2000; ++iter) {
    Mpf worst(0, prec);
    for (int k = 0; k < d; ++k) {
      CF num = horner(p, z[static_cast<std::size_t>(k)], prec);
      CF den(Mpf(1, prec), Mpf(0, prec));
      for (int j = 0; j < d; ++j)
        if (j != k)
          den = den * (z[static_cast<std::size_t>(k)] -
                       z[static_cast<std::size_t>(j)]);
      CF delta = num / den;
      z[static_cast<std::size_t>(k)] =
          z[static_cast<std::size_t>(k)] - delta;
      Mpf step = abs2(delta);
      if (step > worst) worst = step;
    }
    if (worst < tol2) break;
    if (iter == 1999)
      throw Error("polynomial root iteration failed to converge");
  }
  // Newton polish.
  IntPoly dp = p.derivative();
  for (auto& root : z)
    for (int it = 0; it < 4; ++it) {
      CF num = horner(p, root, prec);
      CF den = horner(dp, root, prec);
      if (abs2(den) == 0) break;
      root = root - num / den;
    }
  return z;
}

namespace detail {

inline CMat cmat_identity(std::size_t n, unsigned long prec) {
  CMat m(n, CVec(n, CF(Mpf(0, prec), Mpf(0, prec))));
  for (std::size_t i = 0; i < n; ++i) m[i][i].re = Mpf(1, prec);
  return m;
}

inline CMat cmat_mul(const CMat& a, const CMat& b, unsigned long prec) {
  std::size_t n = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  CMat out(n, CVec(c, CF(Mpf(0, prec), Mpf(0, prec))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < c; ++l) out[i][l] = out[i][l] + a[i][j] * b[j][l];
  return out;
}

inline CVec cmat_apply(const CMat& a, const CVec& v, unsigned long prec) {
  std::size_t n = a.size();
  CVec out(n, CF(Mpf(0, prec), Mpf(0, prec)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      out[i] = out[i] + a[i][j] * v[j];
  return out;
}

}  // namespace detail

// Numeric right-kernel basis of a complex matrix via Gaussian elimination
// with full magnitude pivoting; entries below the tolerance are treated as
// zero. Returns one vector per free column.
inline std::vector<CVec> numeric_kernel(CMat a, unsigned long prec,
                                        const Mpf& tol) {
  std::size_t rows = a.size();
  std::size_t cols = rows == 0 ? 0 : a[0].size();
  Mpf tol2 = tol * tol;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    Mpf bestv = abs2(a[r][c]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      Mpf v = abs2(a[i][c]);
      if (v > bestv) {
        best = i;
        bestv = v;
      }
    }
    if (bestv <= tol2) continue;
    std::swap(a[r], a[best]);
    CF inv = CF(Mpf(1, prec), Mpf(0, prec)) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      CF f = a[i][c];
      if (abs2(f) == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        a[i][j] = a[i][j] - f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<CVec> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    CVec v(cols, CF(Mpf(0, prec), Mpf(0, prec)));
    v[c].re = Mpf(1, prec);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      v[pivot_col[k]] = CF(Mpf(0, prec), Mpf(0, prec)) - a[k][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

// --- real float matrices -------------------------------------------------
//
// Mat<Mpf> needs care: assigning to an mpf_class keeps the precision of the
// destination, so matrices must have every entry widened before use. These
// helpers construct and combine FMat values at an explicit precision and are
// the only way float matrices are built in this codebase.

inline FMat make_fmat(std::size_t rows, std::size_t cols, unsigned long prec) {
  FMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j).set_prec(prec);
  return m;
}

inline FMat fmat_identity(std::size_t n, unsigned long prec) {
  FMat m = make_fmat(n, n, prec);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

inline FMat fmat_from_zmat(const ZMat& a, unsigned long prec) {
  FMat m = make_fmat(a.rows(), a.cols(), prec);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m.at(i, j) = mpf_from_int(a.at(i, j), prec);
  return m;
}

inline FMat fmat_transpose(const FMat& a, unsigned long prec) {
  FMat m = make_fmat(a.cols(), a.rows(), prec);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(j, i) = a.at(i, j);
  return m;
}

inline FMat fmat_mul(const FMat& a, const FMat& b, unsigned long prec) {
  if (a.cols() != b.rows()) throw Error("matrix shape mismatch");
  FMat m = make_fmat(a.rows(), b.cols(), prec);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Mpf acc(0, prec);
      for (std::size_t k = 0; k < a.cols(); ++k)
        acc += a.at(i, k) * b.at(k, j);
      m.at(i, j) = acc;
    }
  return m;
}

// p(a) by Horner on the matrix.
inline FMat fmat_poly_at(const IntPoly& p, const FMat& a, unsigned long prec) {
  if (!a.is_square()) throw Error("polynomial of a non-square matrix");
  std::size_t n = a.rows();
  FMat acc = make_fmat(n, n, prec);
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = fmat_mul(acc, a, prec);
    Mpf ci = mpf_from_int(c[i], prec);
    for (std::size_t d = 0; d < n; ++d) acc.at(d, d) += ci;
  }
  return acc;
}

// Copy with every entry widened (or narrowed) to the given precision.
inline FMat fmat_at_precision(const FMat& a, unsigned long prec) {
  FMat m = make_fmat(a.rows(), a.cols(), prec);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
  return m;
}

// Assignment to mpf_class keeps the destination precision; this helper
// replaces value and precision together.
inline void mpf_assign(Mpf& dst, const Mpf& src) {
  dst.set_prec(src.get_prec());
  dst = src;
}

struct WorstEntry {
  Mpf value;
  std::size_t row = 0, col = 0;
};

// max |a - b| over entries, with its location
inline WorstEntry fmat_max_abs_diff(const FMat& a, const FMat& b,
                                    unsigned long prec) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("matrix shape mismatch");
  WorstEntry w;
  w.value.set_prec(prec);
  w.value = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Mpf d(0, prec);
      d = abs(a.at(i, j) - b.at(i, j));
      if (d > w.value) {
        w.value = d;
        w.row = i;
        w.col = j;
      }
    }
  return w;
}

// |det a| by LU with partial pivoting; returns 0 when a pivot vanishes.
inline Mpf fmat_abs_det(FMat a, unsigned long prec) {
  if (!a.is_square()) throw Error("determinant of a non-square matrix");
  std::size_t n = a.rows();
  Mpf det(1, prec);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    Mpf bestv(0, prec);
    bestv = abs(a.at(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      Mpf v(0, prec);
      v = abs(a.at(i, c));
      if (v > bestv) {
        bestv = v;
        best = i;
      }
    }
    if (bestv == 0) return Mpf(0, prec);
    if (best != c)
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a.at(c, j), a.at(best, j));
    det *= bestv;
    Mpf inv(0, prec);
    inv = 1 / a.at(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      Mpf f(0, prec);
      f = a.at(i, c) * inv;
      if (f == 0) continue;
      for (std::size_t j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
    }
  }
  return det;
}

// Rank of a set of complex vectors under the tolerance, by elimination
// against an accumulated list of normalized pivot rows.
inline std::size_t numeric_rank(const std::vector<CVec>& vecs,
                                unsigned long prec, const Mpf& tol) {
  Mpf tol2 = tol * tol;
  std::vector<CVec> rows;
  std::vector<std::size_t> used;
  std::size_t cols = vecs.empty() ? 0 : vecs[0].size();
  for (const CVec& orig : vecs) {
    CVec v = orig;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CF f = v[used[k]];
      for (std::size_t j = 0; j < cols; ++j) v[j] = v[j] - f * rows[k][j];
    }
    std::size_t piv = cols;
    Mpf bestv(0, prec);
    for (std::size_t j = 0; j < cols; ++j) {
      Mpf m = abs2(v[j]);
      if (m > bestv) {
        bestv = m;
        piv = j;
      }
    }
    if (piv == cols || bestv <= tol2) continue;
    CF inv = CF(Mpf(1, prec), Mpf(0, prec)) / v[piv];
    for (std::size_t j = 0; j < cols; ++j) v[j] = v[j] * inv;
    rows.push_back(std::move(v));
    used.push_back(piv);
  }
  return rows.size();
}

}  // namespace otforge
