// SPDX-License-Identifier: Apache-2.0
//
// The bridge to the classical construction: build X(K, O, U) data for the
// order Z[xi] of a field generated by a positive unit, and verify, entry for
// entry over Z, that the multiplication matrices coincide with the monodromy
// matrices of the torus-side manifold built from the transposed companion
// matrix. Everything here is exact; the only interval work is the log-basis
// certificate.

#pragma once

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
#include "otforge/poly.hpp"
#include "otforge/realroots.hpp"
#include "otforge/units.hpp"

namespace otforge {

// Matrix of multiplication by d(xi) on Z[xi] in the power basis
// 1, xi, ..., xi^{N-1}: column r holds the coordinates of d(xi) * xi^r.
inline ZMat multiplication_matrix(const IntPoly& p, const IntPoly& d) {
  if (p.degree() < 1 || !p.is_monic())
    throw Error("multiplication matrix needs a monic nonconstant modulus");
  std::size_t nn = static_cast<std::size_t>(p.degree());
  ZMat m(nn, nn);
  IntPoly cur = mod_monic(d, p);
  for (std::size_t c = 0; c < nn; ++c) {
    for (std::size_t r = 0; r < nn; ++r) m.at(r, c) = cur.coeff(r);
    cur = mod_monic(cur * IntPoly::var(), p);
  }
  return m;
}

// The assembled OT action data for the order Z[xi]: the field polynomial,
// signature, unit representatives, the translation lattice as the power
// basis, and the multiplication matrices.
struct OTActionData {
  IntPoly p;
  int s = 0;
  int n = 0;
  std::vector<IntPoly> unit_polys;  // D_i reduced mod p
  std::vector<OrderElement> translation_lattice;  // xi^0 .. xi^{s+2n-1}
  std::vector<ZMat> multiplication_matrices;
  Interval log_det;  // set when the log basis was certified
  long log_bits = 0;
};

struct OTBridgeOptions {
  long budget_bits = 256;
};

namespace detail {

enum class LogBasisCheck { certified, singular, undetermined };

struct LogBasisOutcome {
  LogBasisCheck status = LogBasisCheck::undetermined;
  Interval det;
  long bits = 0;
};

inline LogBasisOutcome check_unit_log_basis(const std::vector<RealAlgebraic>& roots,
                                            const std::vector<IntPoly>& reps,
                                            long budget_bits) {
  LogBasisOutcome out;
  std::size_t s = reps.size();
  long budget = budget_bits < 64 ? 64 : budget_bits;
  long bits = 64;
  for (;;) {
    Rat w = width_from_bits(bits);
    std::vector<std::vector<Interval>> logs(s, std::vector<Interval>(s));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        logs[i][j] = log_abs_enclosure(roots[j], reps[i], w);
    out.det = interval_det(logs);
    out.bits = bits;
    if (!out.det.contains_zero()) {
      out.status = LogBasisCheck::certified;
      return out;
    }
    if (out.det.is_point()) {
      out.status = LogBasisCheck::singular;
      return out;
    }
    if (bits >= budget) {
      out.status = LogBasisCheck::undetermined;
      return out;
    }
    bits = std::min(budget, bits * 2);
  }
}

// Everything build_ot_action certifies except the log-basis condition:
// field polynomial checks, unit and positivity certificates, lattice and
// multiplication matrices with their determinants.
inline OTActionData assemble_ot_action(const IntPoly& p,
                                       const std::vector<IntPoly>& unit_polys) {
  if (p.degree() < 1 || !p.is_monic())
    throw Error("field polynomial must be monic and nonconstant");
  if (!irreducibility_witness(p))
    throw CertificateError(
        "irreducibility of the field polynomial could not be witnessed");
  int s = count_real_roots(p);
  int n = (p.degree() - s) / 2;
  if (s < 1) throw Error("field polynomial has no real root: s = 0");
  if (n < 1) throw Error("field is totally real: n = 0");
  if (unit_polys.size() != static_cast<std::size_t>(s))
    throw Error("need exactly s = " + std::to_string(s) +
                " units for the log lattice, got " +
                std::to_string(unit_polys.size()));

  OTActionData act;
  act.p = p;
  act.s = s;
  act.n = n;

  auto roots = isolate_real_roots(p);
  for (std::size_t i = 0; i < unit_polys.size(); ++i) {
    OrderElement u = OrderElement::make(p, unit_polys[i]);
    if (!is_unit(u))
      throw CertificateError("member " + std::to_string(i + 1) +
                             " is not a unit of Z[t]/(p)");
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (sign_at(roots[j], u.rep) != 1)
        throw CertificateError(
            "member " + std::to_string(i + 1) +
            " is not positive at real embedding " + std::to_string(j + 1) +
            "; replace the unit by its square to fix every sign");
    act.unit_polys.push_back(std::move(u.rep));
  }

  std::size_t nn = static_cast<std::size_t>(p.degree());
  for (std::size_t r = 0; r < nn; ++r)
    act.translation_lattice.push_back(
        OrderElement::make(p, IntPoly::monomial(Int(1), r)));

  for (const IntPoly& d : act.unit_polys) {
    ZMat mm = multiplication_matrix(p, d);
    Int det = det_bareiss(mm);
    if (det != 1)
      throw Error("multiplication matrix has determinant " + to_decimal(det) +
                  "; a unit positive at every real embedding must have norm "
                  "+1, so this needs investigation");
    act.multiplication_matrices.push_back(std::move(mm));
  }
  return act;
}

}  // namespace detail

// Full build: assembly plus the certified log-basis condition on the
// enclosures of log D_i(alpha_j).
inline OTActionData build_ot_action(const IntPoly& p,
                                    const std::vector<IntPoly>& unit_polys,
                                    const OTBridgeOptions& opt = {}) {
  OTActionData act = detail::assemble_ot_action(p, unit_polys);
  auto roots = isolate_real_roots(p);
  detail::LogBasisOutcome log =
      detail::check_unit_log_basis(roots, act.unit_polys, opt.budget_bits);
  if (log.status == detail::LogBasisCheck::singular)
    throw CertificateError(
        "log matrix of the units is exactly singular; they do not span the "
        "log lattice");
  if (log.status == detail::LogBasisCheck::undetermined)
    throw CertificateError(
        "log-basis condition undetermined within the precision budget");
  act.log_det = log.det;
  act.log_bits = log.bits;
  return act;
}

// The exact identity certificate between the order-side action and the
// torus-side manifold data: a list of verified equalities, or the first
// mismatch down to the offending entry.
struct IdentityCertificate {
  bool matched = false;
  std::vector<std::string> checks;
  std::string mismatch;
};

// Verifies, exactly over Z, that the multiplication matrices, the values
// D_i(C_P), and the monodromies of the manifold built from the transposed
// companion matrix are one and the same family of matrices, and that both
// constructions read their scale factors off the same algebraic data (same
// defining polynomial, same isolating intervals, same evaluation
// polynomials). Unit, positivity and determinant certificates are enforced;
// the log-basis condition is only reported, so degenerate inputs still get
// an exact comparison.
inline IdentityCertificate compare_with_tm(const IntPoly& p,
                                           const std::vector<IntPoly>& unit_polys,
                                           const OTBridgeOptions& opt = {}) {
  OTActionData act = detail::assemble_ot_action(p, unit_polys);
  IdentityCertificate cert;
  std::size_t s = act.unit_polys.size();

  ZMat cp = companion(p);
  ZMat torus = cp.transpose();  // the matrix whose manifold we compare against

  auto mat_equal = [&cert](const ZMat& a, const ZMat& b,
                           const std::string& what) -> bool {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      cert.mismatch = what + ": shapes differ";
      return false;
    }
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c)
        if (a.at(r, c) != b.at(r, c)) {
          cert.mismatch = what + ": entry (" + std::to_string(r) + ", " +
                          std::to_string(c) + ") is " + to_decimal(a.at(r, c)) +
                          " against " + to_decimal(b.at(r, c));
          return false;
        }
    cert.checks.push_back(what);
    return true;
  };

  for (std::size_t i = 0; i < s; ++i) {
    std::string tag = "u_" + std::to_string(i + 1);
    ZMat dcp = poly_at(act.unit_polys[i], cp);
    if (!mat_equal(act.multiplication_matrices[i], dcp,
                   "multiplication by " + tag + " equals D_" +
                       std::to_string(i + 1) + "(C_P)"))
      return cert;
    ZMat monodromy = poly_at(unit_polys[i], torus.transpose());
    if (!mat_equal(monodromy, act.multiplication_matrices[i],
                   "torus-side monodromy D_" + std::to_string(i + 1) +
                       "(M^T) equals the multiplication matrix"))
      return cert;
  }

  IntPoly torus_char = char_poly(torus);
  if (!(torus_char == p)) {
    cert.mismatch =
        "characteristic polynomial of the torus-side matrix is not p";
    return cert;
  }
  cert.checks.push_back("characteristic polynomial of the torus-side matrix is p");

  auto roots_field = isolate_real_roots(p);
  auto roots_torus = isolate_real_roots(torus_char);
  if (roots_field.size() != roots_torus.size()) {
    cert.mismatch = "real embedding counts differ between the two sides";
    return cert;
  }
  for (std::size_t j = 0; j < roots_field.size(); ++j) {
    if (!(roots_field[j].defpoly() == roots_torus[j].defpoly()) ||
        roots_field[j].lo() != roots_torus[j].lo() ||
        roots_field[j].hi() != roots_torus[j].hi()) {
      cert.mismatch = "isolating data of real embedding " +
                      std::to_string(j + 1) + " differs between the sides";
      return cert;
    }
  }
  cert.checks.push_back(
      "real embeddings carry identical defining polynomials and isolating "
      "intervals on both sides");

  for (std::size_t i = 0; i < s; ++i) {
    if (!(mod_monic(unit_polys[i], p) == act.unit_polys[i])) {
      cert.mismatch = "scale tuple " + std::to_string(i + 1) +
                      " evaluates different polynomials on the two sides";
      return cert;
    }
  }
  cert.checks.push_back(
      "scale tuples agree as exact algebraic data: same evaluation "
      "polynomials at the same roots");

  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) {
      ZMat ab = act.multiplication_matrices[i] * act.multiplication_matrices[j];
      ZMat ba = act.multiplication_matrices[j] * act.multiplication_matrices[i];
      if (!mat_equal(ab, ba,
                     "multiplication matrices " + std::to_string(i + 1) +
                         " and " + std::to_string(j + 1) + " commute"))
        return cert;
    }

  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j) {
      IntPoly prod = mod_monic(act.unit_polys[i] * act.unit_polys[j], p);
      ZMat lhs = multiplication_matrix(p, prod);
      ZMat rhs = act.multiplication_matrices[i] * act.multiplication_matrices[j];
      if (!mat_equal(lhs, rhs,
                     "multiplication by u_" + std::to_string(i + 1) + "*u_" +
                         std::to_string(j + 1) +
                         " equals the product of multiplication matrices"))
        return cert;
    }

  cert.checks.push_back(
      "every multiplication matrix has determinant +1 (norm of a positive "
      "unit)");

  detail::LogBasisOutcome log =
      detail::check_unit_log_basis(roots_field, act.unit_polys, opt.budget_bits);
  switch (log.status) {
    case detail::LogBasisCheck::certified:
      cert.checks.push_back("log basis certified: determinant enclosure "
                            "excludes zero");
      break;
    case detail::LogBasisCheck::singular:
      cert.checks.push_back(
          "note: unit logs are exactly singular (degenerate input); the "
          "identity above is still exact");
      break;
    case detail::LogBasisCheck::undetermined:
      cert.checks.push_back(
          "note: log-basis condition undetermined at this budget; the "
          "identity above is still exact");
      break;
  }

  cert.matched = true;
  return cert;
}

}  // namespace otforge
