// SPDX-License-Identifier: Apache-2.0
//
// Assembly of the twisted diagonal action behind T(M, D): the mixed
// real/complex eigenbasis, the lattice basis matrix Q, the block matrix
// U = Delta (+) R, the monodromy matrices D_i(M^T) and the residual checks
// that tie the floating data back to exact statements.
//
// Conventions, fixed once:
//   * real eigenvalues are numbered ascending;
//   * of each conjugate pair the root with positive imaginary part lands
//     in W;
//   * W lists the B0 blocks first (roots sorted by real then imaginary
//     part, Jordan chains longest first, eigenvector leading), then the
//     remaining factors in factorization order;
//   * Q holds the lattice basis vectors v_i as columns, i.e. Q is the
//     transpose of the matrix whose columns are a_1..a_s, Re b_1, Im b_1,
//     ..., Re b_n, Im b_n. With the 2x2 realification block of z chosen as
//     ((Re z, Im z), (-Im z, Re z)) inside numeric_U, the invariance law
//     reads U^T Q = Q M^T entrywise.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/classify.hpp"
#include "otforge/errors.hpp"
#include "otforge/interval.hpp"
#include "otforge/matrix.hpp"
#include "otforge/numeric.hpp"
#include "otforge/poly.hpp"
#include "otforge/realroots.hpp"
#include "otforge/units.hpp"

namespace otforge {

struct EigenOptions {
  unsigned long precision = 256;
  // tolerance exponent for numeric kernel ranks; 0 picks precision / 2
  long kernel_tol_bits = 0;
};

// One exact real eigenvector: integer-polynomial coordinates in the root of
// the named irreducible factor, primitive and sign-normalized.
struct RealEigenvector {
  std::size_t factor_index = 0;
  std::vector<IntPoly> coords;
};

// One block of the restriction of M to W: a Jordan block of the given size
// for the eigenvalue beta (size 1 unless beta is a repeated root of B0).
struct WBlock {
  CF beta;
  std::size_t size = 1;
  bool from_b0 = false;
};

struct Eigenstructure {
  std::size_t s = 0, n = 0;
  std::vector<RealAlgebraic> real_eigs;       // ascending
  std::vector<RealEigenvector> real_vectors;  // aligned with real_eigs
  std::vector<WBlock> blocks;                 // sizes sum to n
  std::vector<CVec> w_basis;                  // n vectors in C^(s+2n)
  CMat r;                                     // restriction to W, block Jordan
  FMat q;                                     // columns are the v_i
  FMat numeric_u;                             // Delta (+) realified R
  Mpf det_q_abs;
  Mpf det_q_residual;
  unsigned long precision = 0;
};

namespace detail {

inline Rat pow2_neg(unsigned long bits) {
  Int d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, bits);
  return Rat(Int(1), d);
}

inline RealAlgebraic refined_to_width(const RealAlgebraic& x, const Rat& w) {
  RealAlgebraic y = x;
  while (y.width() > w) y.refine();
  return y;
}

inline RatPoly reduce_mod(const RatPoly& a, const RatPoly& b) {
  return divmod(a, b).second;
}

// Inverse of a nonzero residue in Q[t]/(b) for irreducible monic b.
inline RatPoly field_inv(const RatPoly& a, const RatPoly& b) {
  auto [g, u, v] = xgcd(a, b);
  (void)v;
  if (g.degree() != 0)
    throw CertificateError(
        "zero divisor met in Q[t]/(B); the factor is not irreducible");
  return reduce_mod(u, b);
}

// Kernel of (M - t I) over the field Q[t]/(b). For b an irreducible factor
// of the characteristic polynomial with simple roots the kernel is one
// dimensional; the vector is returned with integer-polynomial coordinates,
// primitive, first nonzero coordinate having positive leading coefficient,
// and is verified exactly against M x = t x (mod b) before returning.
inline std::vector<IntPoly> exact_eigenvector(const ZMat& m,
                                              const IntPoly& b) {
  std::size_t nn = m.rows();
  RatPoly bm(b);
  std::vector<std::vector<RatPoly>> a(nn, std::vector<RatPoly>(nn));
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j)
      a[i][j] = RatPoly::constant(Rat(m.at(i, j)));
  RatPoly tp(std::vector<Rat>{Rat(0), Rat(1)});
  for (std::size_t i = 0; i < nn; ++i) a[i][i] = a[i][i] - tp;

  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < nn && row < nn; ++col) {
    std::size_t p = row;
    while (p < nn && a[p][col].is_zero()) ++p;
    if (p == nn) continue;
    std::swap(a[row], a[p]);
    RatPoly inv = field_inv(a[row][col], bm);
    for (std::size_t j = col; j < nn; ++j)
      a[row][j] = reduce_mod(a[row][j] * inv, bm);
    for (std::size_t i = 0; i < nn; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      RatPoly f = a[i][col];
      for (std::size_t j = col; j < nn; ++j)
        a[i][j] = reduce_mod(a[i][j] - f * a[row][j], bm);
    }
    pivots.push_back(col);
    ++row;
  }
  if (nn - pivots.size() != 1)
    throw CertificateError(
        "eigenspace over Q[t]/(B) is not one dimensional; the factorization "
        "is not the certified type J shape");
  std::vector<bool> is_pivot(nn, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<RatPoly> x(nn);
  x[free_col] = RatPoly::constant(Rat(1));
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -a[k][free_col];

  // clear denominators and the integer content
  Int den(1);
  for (const RatPoly& c : x)
    for (const Rat& v : c.coeffs())
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<IntPoly> out(nn);
  Int content(0);
  for (std::size_t i = 0; i < nn; ++i) {
    std::vector<Int> ci(x[i].coeffs().size());
    for (std::size_t k = 0; k < ci.size(); ++k) {
      Rat v = Rat(den) * x[i].coeffs()[k];
      ci[k] = v.get_num();
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), ci[k].get_mpz_t());
    }
    out[i] = IntPoly(std::move(ci));
  }
  if (content > 1)
    for (IntPoly& c : out) {
      std::vector<Int> ci(c.coeffs());
      for (Int& v : ci) v /= content;
      c = IntPoly(std::move(ci));
    }
  for (const IntPoly& c : out) {
    if (c.is_zero()) continue;
    if (c.leading() < 0)
      for (IntPoly& d : out) d = -d;
    break;
  }

  // exact check: sum_j m[i][j] x_j = t x_i (mod b) for every row i
  for (std::size_t i = 0; i < nn; ++i) {
    IntPoly acc;
    for (std::size_t j = 0; j < nn; ++j)
      acc = acc + IntPoly({m.at(i, j)}) * out[j];
    acc = acc - IntPoly({Int(0), Int(1)}) * out[i];
    if (!mod_monic(acc, b).is_zero())
      throw Error("internal inconsistency: exact eigenvector check failed");
  }
  return out;
}

// The roots of a squarefree polynomial with positive imaginary part, sorted
// by (Re, Im) and validated against the exact real-root count.
inline CVec positive_im_roots(const IntPoly& g, unsigned long prec) {
  CVec all = all_roots(g, prec);
  Mpf cut = mpf_eps(prec, static_cast<long>(prec) / 2);
  CVec pos;
  int nreal = 0;
  for (const CF& z : all) {
    Mpf a(0, prec);
    a = abs(z.im);
    if (a <= cut)
      ++nreal;
    else if (z.im > 0)
      pos.push_back(z);
  }
  int expect = count_real_roots(g);
  if (nreal != expect ||
      2 * pos.size() != static_cast<std::size_t>(g.degree() - expect))
    throw Error(
        "numeric real/imaginary root separation disagrees with the Sturm "
        "count; raise the float precision");
  std::sort(pos.begin(), pos.end(), [](const CF& a, const CF& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return pos;
}

inline CMat cmat_from_zmat(const ZMat& m, unsigned long prec) {
  std::size_t nn = m.rows();
  CMat out(nn, CVec(nn, CF(Mpf(0, prec), Mpf(0, prec))));
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j)
      out[i][j].re = mpf_from_int(m.at(i, j), prec);
  return out;
}

inline CVec normalized_by_largest(CVec v, unsigned long prec) {
  std::size_t arg = 0;
  Mpf best = abs2(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    Mpf a = abs2(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best == 0) throw Error("cannot normalize a zero vector");
  CF inv = CF(Mpf(1, prec), Mpf(0, prec)) / v[arg];
  for (CF& e : v) e = e * inv;
  return v;
}

// Jordan chains for the eigenvalue behind `shifted` = M - beta I, of total
// algebraic multiplicity mult. Chains come out longest first, each listed
// eigenvector first, so the restriction matrix on the chain is the upper
// Jordan block. Only the chain top is normalized; the rest must stay exact
// images under `shifted` or the block identity breaks.
inline std::vector<std::vector<CVec>> jordan_chains(const CMat& shifted,
                                                    std::size_t mult,
                                                    unsigned long prec,
                                                    const Mpf& tol) {
  std::vector<std::vector<CVec>> kernels;
  std::vector<std::size_t> dims;
  CMat power = shifted;
  for (std::size_t k = 1; k <= mult; ++k) {
    auto kb = numeric_kernel(power, prec, tol);
    if (kb.size() > mult)
      throw Error("kernel dimension exceeds the algebraic multiplicity; "
                  "kernel tolerance too coarse");
    if (!dims.empty() && kb.size() <= dims.back())
      throw Error("nested kernel chain stalled; raise the float precision");
    dims.push_back(kb.size());
    kernels.push_back(std::move(kb));
    if (dims.back() == mult) break;
    power = cmat_mul(power, shifted, prec);
  }
  if (dims.back() != mult)
    throw Error("generalized eigenspace never reached full multiplicity");

  std::size_t depth = dims.size();
  auto chains_of_length_ge = [&](std::size_t k) -> std::size_t {
    if (k > depth) return 0;
    return dims[k - 1] - (k >= 2 ? dims[k - 2] : 0);
  };
  std::vector<std::vector<CVec>> level(depth + 1);
  std::vector<std::vector<CVec>> chains;
  for (std::size_t k = depth; k >= 1; --k) {
    std::size_t need = chains_of_length_ge(k) - chains_of_length_ge(k + 1);
    for (std::size_t c = 0; c < need; ++c) {
      std::vector<CVec> span;
      if (k >= 2) span = kernels[k - 2];
      for (const CVec& w : level[k]) span.push_back(w);
      std::size_t base = numeric_rank(span, prec, tol);
      bool placed = false;
      for (const CVec& cand : kernels[k - 1]) {
        std::vector<CVec> trial = span;
        trial.push_back(cand);
        if (numeric_rank(trial, prec, tol) <= base) continue;
        CVec top = normalized_by_largest(cand, prec);
        std::vector<CVec> chain(k);
        chain[k - 1] = top;
        for (std::size_t l = k - 1; l >= 1; --l)
          chain[l - 1] = cmat_apply(shifted, chain[l], prec);
        for (std::size_t l = 1; l <= k; ++l)
          level[l].push_back(chain[l - 1]);
        chains.push_back(std::move(chain));
        placed = true;
        break;
      }
      if (!placed)
        throw Error("failed to extract a Jordan chain at this precision");
    }
    if (k == 1) break;
  }
  return chains;
}

// Enclosure of q(x), refined until it is certainly positive and no wider
// than `width`.
inline Interval positive_value_enclosure(const RealAlgebraic& x,
                                         const IntPoly& q, const Rat& width) {
  RealAlgebraic y = x;
  for (int guard = 0; guard < 100000; ++guard) {
    Interval v = interval_eval(q, y.interval());
    if (sign_of(v.lo) > 0 && v.width() <= width) return v;
    y.refine();
  }
  throw Error("value enclosure failed to become positive; sign check and "
              "evaluation disagree");
}

}  // namespace detail

// Exact real spectrum plus floating W data for a matrix with a certified
// type J factorization. Everything floating is later re-validated by
// verify_lattice_invariance; this routine's own exact guards only catch
// inputs that were never of the certified shape.
inline Eigenstructure eigenstructure(const ZMat& m, const FactoredCharPoly& f,
                                     const EigenOptions& opt = {}) {
  if (!m.is_square()) throw Error("eigenstructure of a non-square matrix");
  unsigned long prec = opt.precision < 53 ? 53 : opt.precision;
  IntPoly cp = char_poly(m);
  if (f.product() != cp)
    throw CertificateError(
        "factorization does not multiply back to the characteristic "
        "polynomial");
  if (f.factors.empty())
    throw CertificateError("type J factorization has no irreducible factor");
  if (f.b0.degree() >= 1 && count_real_roots(f.b0) != 0)
    throw CertificateError("B0 has a real root; matrix is not of type J");

  std::size_t nn = m.rows();
  Eigenstructure e;
  e.precision = prec;

  std::vector<std::pair<RealAlgebraic, std::size_t>> reals;
  for (std::size_t j = 0; j < f.factors.size(); ++j)
    for (RealAlgebraic& r : isolate_real_roots(f.factors[j]))
      reals.emplace_back(std::move(r), j);
  if (reals.empty())
    throw CertificateError("no real eigenvalue; matrix is not of type J");
  std::sort(reals.begin(), reals.end(),
            [](const auto& a, const auto& b) {
              return compare(a.first, b.first) < 0;
            });
  e.s = reals.size();
  if ((nn - e.s) % 2 != 0)
    throw CertificateError("real spectrum has the wrong parity");
  e.n = (nn - e.s) / 2;

  std::vector<std::vector<IntPoly>> per_factor(f.factors.size());
  for (std::size_t j = 0; j < f.factors.size(); ++j)
    per_factor[j] = detail::exact_eigenvector(m, f.factors[j]);
  for (auto& [root, j] : reals) {
    e.real_eigs.push_back(std::move(root));
    e.real_vectors.push_back(RealEigenvector{j, per_factor[j]});
  }

  // W part: B0 blocks first, then the factors in order.
  Mpf ktol = mpf_eps(prec, opt.kernel_tol_bits > 0
                               ? opt.kernel_tol_bits
                               : static_cast<long>(prec) / 2);
  if (f.b0.degree() >= 1) {
    std::vector<std::pair<CF, std::size_t>> b0_roots;
    for (const auto& [g, mult] : squarefree_decomposition(f.b0))
      for (const CF& z : detail::positive_im_roots(g, prec))
        b0_roots.emplace_back(z, static_cast<std::size_t>(mult));
    std::sort(b0_roots.begin(), b0_roots.end(),
              [](const auto& a, const auto& b) {
                if (a.first.re != b.first.re) return a.first.re < b.first.re;
                return a.first.im < b.first.im;
              });
    for (const auto& [beta, mult] : b0_roots) {
      CMat shifted = detail::cmat_from_zmat(m, prec);
      for (std::size_t i = 0; i < nn; ++i)
        shifted[i][i] = shifted[i][i] - beta;
      if (mult == 1) {
        auto ker = numeric_kernel(shifted, prec, ktol);
        if (ker.size() != 1)
          throw Error("eigenspace of a simple eigenvalue is not a line; "
                      "kernel tolerance too coarse");
        e.blocks.push_back(WBlock{beta, 1, true});
        e.w_basis.push_back(detail::normalized_by_largest(ker[0], prec));
      } else {
        for (auto& chain : detail::jordan_chains(shifted, mult, prec, ktol)) {
          e.blocks.push_back(WBlock{beta, chain.size(), true});
          for (CVec& w : chain) e.w_basis.push_back(std::move(w));
        }
      }
    }
  }
  for (std::size_t j = 0; j < f.factors.size(); ++j)
    for (const CF& beta : detail::positive_im_roots(f.factors[j], prec)) {
      CVec v(nn, CF(Mpf(0, prec), Mpf(0, prec)));
      for (std::size_t i = 0; i < nn; ++i)
        v[i] = horner(per_factor[j][i], beta, prec);
      e.blocks.push_back(WBlock{beta, 1, false});
      e.w_basis.push_back(std::move(v));
    }
  if (e.w_basis.size() != e.n)
    throw CertificateError("W basis size disagrees with (N - s) / 2");

  // restriction matrix on W: Jordan blocks straight from the chain layout
  e.r = CMat(e.n, CVec(e.n, CF(Mpf(0, prec), Mpf(0, prec))));
  std::size_t off = 0;
  for (const WBlock& blk : e.blocks) {
    for (std::size_t l = 0; l < blk.size; ++l) {
      e.r[off + l][off + l] = blk.beta;
      if (l + 1 < blk.size) e.r[off + l][off + l + 1].re = Mpf(1, prec);
    }
    off += blk.size;
  }

  // Q: columns are the v_i, i.e. the transpose of the eigenvector matrix
  FMat er = make_fmat(nn, nn, prec);
  Rat target = detail::pow2_neg(prec + 16);
  std::vector<Mpf> alpha_f;
  for (std::size_t c = 0; c < e.s; ++c) {
    RealAlgebraic x = detail::refined_to_width(e.real_eigs[c], target);
    Rat mid = x.approx();
    alpha_f.push_back(mpf_from_rat(mid, prec));
    for (std::size_t i = 0; i < nn; ++i)
      er.at(i, c) =
          mpf_from_rat(e.real_vectors[c].coords[i].eval(mid), prec);
  }
  for (std::size_t l = 0; l < e.n; ++l)
    for (std::size_t i = 0; i < nn; ++i) {
      er.at(i, e.s + 2 * l) = e.w_basis[l][i].re;
      er.at(i, e.s + 2 * l + 1) = e.w_basis[l][i].im;
    }
  e.q = fmat_transpose(er, prec);

  e.numeric_u = make_fmat(nn, nn, prec);
  for (std::size_t j = 0; j < e.s; ++j) e.numeric_u.at(j, j) = alpha_f[j];
  for (std::size_t bi = 0; bi < e.n; ++bi)
    for (std::size_t bj = 0; bj < e.n; ++bj) {
      const CF& z = e.r[bi][bj];
      e.numeric_u.at(e.s + 2 * bi, e.s + 2 * bj) = z.re;
      e.numeric_u.at(e.s + 2 * bi, e.s + 2 * bj + 1) = z.im;
      e.numeric_u.at(e.s + 2 * bi + 1, e.s + 2 * bj) = -z.im;
      e.numeric_u.at(e.s + 2 * bi + 1, e.s + 2 * bj + 1) = z.re;
    }

  Mpf d1 = fmat_abs_det(e.q, prec);
  Mpf d2 = fmat_abs_det(fmat_at_precision(e.q, prec + 64), prec + 64);
  mpf_assign(e.det_q_abs, d2);
  Mpf resid(0, prec + 64);
  resid = abs(d1 - d2);
  mpf_assign(e.det_q_residual, resid);
  if (e.det_q_abs == 0 || e.det_q_abs <= mpf_eps(prec, static_cast<long>(prec) / 4) ||
      e.det_q_residual > e.det_q_abs / 2)
    throw CertificateError(
        "eigenbasis is numerically singular; this contradicts the basis "
        "lemma and signals a precision failure or a non type J input");
  return e;
}

struct LatticeReport {
  bool passed = false;
  Rat tolerance;
  Mpf worst_residual;
  std::string worst_check;  // "base" or "D1", "D2", ...
  std::size_t worst_row = 0, worst_col = 0;
  std::vector<Int> monodromy_dets;
  std::string message;
};

// The invariance law U^T Q = Q M^T and its images under every family
// member, checked entrywise against the tolerance, plus the exact side
// check det D_i(M^T) = 1.
inline LatticeReport verify_lattice_invariance(const ZMat& m,
                                               const std::vector<IntPoly>& polys,
                                               const Eigenstructure& eig,
                                               const Rat& tolerance) {
  unsigned long prec = eig.precision;
  if (eig.q.rows() != m.rows())
    throw Error("eigenstructure does not match the matrix size");
  LatticeReport rep;
  rep.tolerance = tolerance;
  Mpf tolf = mpf_from_rat(tolerance, prec);

  ZMat mtz = m.transpose();
  FMat mt = fmat_from_zmat(mtz, prec);
  FMat ut = fmat_transpose(eig.numeric_u, prec);
  WorstEntry base = fmat_max_abs_diff(fmat_mul(ut, eig.q, prec),
                                      fmat_mul(eig.q, mt, prec), prec);
  mpf_assign(rep.worst_residual, base.value);
  rep.worst_check = "base";
  rep.worst_row = base.row;
  rep.worst_col = base.col;
  bool ok = base.value <= tolf;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    ZMat dm = poly_at(polys[i], mtz);
    Int dd = det_bareiss(dm);
    rep.monodromy_dets.push_back(dd);
    if (dd != 1) {
      ok = false;
      if (rep.message.empty())
        rep.message = "det D_" + std::to_string(i + 1) +
                      "(M^T) = " + to_decimal(dd) + ", expected 1";
    }
    WorstEntry w = fmat_max_abs_diff(
        fmat_mul(fmat_poly_at(polys[i], ut, prec), eig.q, prec),
        fmat_mul(eig.q, fmat_from_zmat(dm, prec), prec), prec);
    if (w.value > rep.worst_residual) {
      mpf_assign(rep.worst_residual, w.value);
      rep.worst_check = "D" + std::to_string(i + 1);
      rep.worst_row = w.row;
      rep.worst_col = w.col;
    }
    if (w.value > tolf) ok = false;
  }
  rep.passed = ok;
  if (rep.message.empty()) {
    if (ok) {
      rep.message = "all residual and determinant checks passed";
    } else {
      mp_exp_t ex;
      std::string digits = rep.worst_residual.get_str(ex, 10, 6);
      rep.message = "residual above tolerance in check " + rep.worst_check +
                    " at entry (" + std::to_string(rep.worst_row) + ", " +
                    std::to_string(rep.worst_col) + "), about 0." + digits +
                    "e" + std::to_string(ex);
    }
  }
  return rep;
}

// Twisted diagonal action data: s positive scale vectors and s commuting
// lattice automorphisms.
struct TwistedDiagonalAction {
  std::size_t s = 0;
  std::size_t k = 0;
  std::vector<std::vector<Interval>> scale_vectors;  // s vectors of length s
  std::vector<ZMat> lattice_matrices;                // s matrices, k x k
  bool nondegenerate = false;
};

enum class NondegeneracyStatus { certified, undetermined };

// Interval certificate that the componentwise logs of the scale vectors are
// a basis: the interval determinant of the log matrix must exclude zero.
// Never throws; anything malformed or too wide comes back undetermined.
inline NondegeneracyStatus check_nondegenerate(const TwistedDiagonalAction& act,
                                               long budget_bits = 256) {
  std::size_t s = act.s;
  if (s == 0 || act.scale_vectors.size() != s) return NondegeneracyStatus::undetermined;
  mpfr_prec_t bits = budget_bits < 64 ? 64 : static_cast<mpfr_prec_t>(budget_bits);
  std::vector<std::vector<Interval>> logs(s, std::vector<Interval>(s));
  for (std::size_t i = 0; i < s; ++i) {
    if (act.scale_vectors[i].size() != s) return NondegeneracyStatus::undetermined;
    for (std::size_t j = 0; j < s; ++j) {
      const Interval& v = act.scale_vectors[i][j];
      if (sign_of(v.lo) <= 0) return NondegeneracyStatus::undetermined;
      logs[i][j] = Interval(detail::log_directed(v.lo, bits, MPFR_RNDD),
                            detail::log_directed(v.hi, bits, MPFR_RNDU));
    }
  }
  Interval det = detail::interval_det(logs);
  return det.contains_zero() ? NondegeneracyStatus::undetermined
                             : NondegeneracyStatus::certified;
}

struct GroupPresentation {
  std::size_t base_rank = 0;   // s
  std::size_t fiber_rank = 0;  // s + 2n
  std::string description;
};

struct ManifoldData {
  std::size_t s = 0, n = 0;
  std::size_t complex_dimension = 0;  // s + n
  std::vector<IntPoly> family;
  std::vector<ZMat> monodromies;  // D_i(M^T)
  std::vector<RealAlgebraic> real_eigs;
  std::vector<std::vector<Interval>> scale_values;  // [i][j] = D_i(alpha_j)
  Eigenstructure eigen;
  TwistedDiagonalAction action;
  bool cross_section = false;
  GroupPresentation group;
  LatticeReport lattice_report;
  DirichletFamily family_certificate;
  std::vector<std::string> certificates;
};

struct ManifoldOptions {
  unsigned long float_precision = 256;
  long budget_bits = 256;
  Rat tolerance = Rat(Int(1), Int(100000000));
  long kernel_tol_bits = 0;
};

// Full assembly behind T(M, D). Re-runs the family checker from scratch,
// builds the eigenstructure, insists on the invariance residuals, and only
// then emits the action and group data.
inline ManifoldData build_manifold(const ZMat& m, const FactoredCharPoly& f,
                                   const std::vector<IntPoly>& polys,
                                   const ManifoldOptions& opt = {}) {
  ManifoldData out;
  out.family = polys;
  out.family_certificate = verify_dirichlet(m, polys, opt.budget_bits);
  if (!out.family_certificate.accepted)
    throw CertificateError("refusing to build: not a certified Dirichlet "
                           "family (" + out.family_certificate.message + ")");
  out.certificates.push_back("dirichlet-axioms");

  EigenOptions eo;
  eo.precision = opt.float_precision;
  eo.kernel_tol_bits = opt.kernel_tol_bits;
  out.eigen = eigenstructure(m, f, eo);
  out.s = out.eigen.s;
  out.n = out.eigen.n;
  out.complex_dimension = out.s + out.n;
  out.real_eigs = out.eigen.real_eigs;
  out.certificates.push_back("eigenbasis-nonsingular");

  out.lattice_report =
      verify_lattice_invariance(m, polys, out.eigen, opt.tolerance);
  if (!out.lattice_report.passed)
    throw CertificateError("refusing to build: lattice invariance failed (" +
                           out.lattice_report.message + ")");
  out.certificates.push_back("lattice-invariance");

  ZMat mt = m.transpose();
  for (const IntPoly& d : polys) out.monodromies.push_back(poly_at(d, mt));
  out.certificates.push_back("monodromy-determinants");

  unsigned long wb = opt.budget_bits > 128 ? static_cast<unsigned long>(opt.budget_bits) / 2 : 64;
  Rat width = detail::pow2_neg(wb);
  for (const IntPoly& d : polys) {
    std::vector<Interval> row;
    for (const RealAlgebraic& a : out.real_eigs)
      row.push_back(detail::positive_value_enclosure(a, d, width));
    out.scale_values.push_back(std::move(row));
  }

  out.action.s = out.s;
  out.action.k = m.rows();
  out.action.scale_vectors = out.scale_values;
  out.action.lattice_matrices = out.monodromies;
  NondegeneracyStatus nd = check_nondegenerate(out.action, opt.budget_bits);
  out.action.nondegenerate = nd == NondegeneracyStatus::certified;
  out.cross_section = out.action.nondegenerate;
  if (out.cross_section) out.certificates.push_back("nondegenerate-log-basis");

  out.group.base_rank = out.s;
  out.group.fiber_rank = m.rows();
  out.group.description =
      "Z^" + std::to_string(out.s) + " acting on Z^" +
      std::to_string(m.rows()) +
      " through the monodromy matrices D_i(M^T); semidirect product of "
      "diagonal type";
  return out;
}

}  // namespace otforge
