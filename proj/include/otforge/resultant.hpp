// SPDX-License-Identifier: Apache-2.0
//
// Resultants and their consequences. Sign convention, fixed once and used
// everywhere:
//
//   Res(a, b) = lc(a)^deg(b) * prod_{a(gamma)=0} b(gamma)
//
// so for monic a, Res(a, u) is the norm of the class of u in Z[t]/a. Two
// independent routes are provided: a pseudo-remainder-sequence recursion with
// exact cofactor bookkeeping (default), and the Bareiss determinant of the
// Sylvester matrix (cross-check).
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"
#include "otforge/matrix.hpp"
#include "otforge/poly.hpp"

namespace otforge {

namespace detail {

// Recursion on the primitive pseudo-remainder sequence. Each step is the
// identity Res(a,b) = (-1)^{da*db} lc(b)^{da - dr - (delta+1) db} c^{db}
// Res(b, r') where prem gives lc(b)^{delta+1} a = q b + r and r = c * r' with
// r' primitive. Exponents may be negative, so the cofactor accumulates in Q;
// the final value is an integer.
inline Rat resultant_prs_rec(const IntPoly& a, const IntPoly& b) {
  int da = a.degree(), db = b.degree();
  if (db == 0) return pow_rat(Rat(b.leading()), da);
  if (da == 0) return pow_rat(Rat(a.leading()), db);
  if (da < db) {
    Rat r = resultant_prs_rec(b, a);
    return (da % 2 == 1 && db % 2 == 1) ? Rat(-r) : r;
  }
  auto [q, r, m] = pseudo_divmod(a, b);
  (void)q;
  (void)m;
  if (r.is_zero()) return Rat(0);
  Int c = r.content();
  if (r.leading() < 0) c = -c;
  IntPoly rp = r.primitive_part();
  if (rp.leading() < 0) rp = -rp;  // r = c * rp with rp positive-leading
  int dr = rp.degree();
  Rat cof = pow_rat(Rat(b.leading()), da - dr - (da - db + 1) * db) *
            pow_rat(Rat(c), db);
  Rat rest = resultant_prs_rec(b, rp);
  Rat out = cof * rest;
  return (da % 2 == 1 && db % 2 == 1) ? Rat(-out) : out;
}

}  // namespace detail

inline Int resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero())
    throw Error("resultant of the zero polynomial");
  Rat r = detail::resultant_prs_rec(a, b);
  if (r.get_den() != 1)
    throw Error("internal: non-integral resultant accumulator");
  return r.get_num();
}

// Sylvester matrix with rows of a's coefficients (deg b of them) above rows
// of b's coefficients (deg a of them), highest coefficients first; its
// determinant equals Res(a, b) under the convention above.
inline ZMat sylvester_matrix(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero())
    throw Error("Sylvester matrix of the zero polynomial");
  std::size_t da = static_cast<std::size_t>(a.degree());
  std::size_t db = static_cast<std::size_t>(b.degree());
  ZMat s(da + db, da + db);
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j <= da; ++j) s.at(i, i + j) = a.coeff(da - j);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j <= db; ++j) s.at(db + i, i + j) = b.coeff(db - j);
  return s;
}

inline Int resultant_sylvester(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero())
    throw Error("resultant of the zero polynomial");
  if (a.degree() == 0) return pow_int(a.leading(), static_cast<unsigned long>(b.degree()));
  if (b.degree() == 0) return pow_int(b.leading(), static_cast<unsigned long>(a.degree()));
  return det_bareiss(sylvester_matrix(a, b));
}

// Witness that (a) + (b) = Z[t]: polynomials with u*a + v*b = 1.
struct BezoutCertificate {
  IntPoly u, v;
  IntPoly a, b;
  bool valid() const { return u * a + v * b == IntPoly::one(); }
};

// Returns a certificate iff |Res(a, b)| = 1. The cofactors solve the
// Sylvester linear system for the constant polynomial 1; because the system's
// determinant is +-1 the solution is integral (solved over Q, integrality
// then checked, and the identity u*a + v*b = 1 re-verified exactly).
inline std::optional<BezoutCertificate> strongly_coprime(const IntPoly& a,
                                                         const IntPoly& b) {
  if (a.is_zero() || b.is_zero())
    throw Error("strong coprimality of the zero polynomial");
  Int res = resultant(a, b);
  if (res != 1 && res != -1) return std::nullopt;
  int da = a.degree(), db = b.degree();
  BezoutCertificate cert;
  cert.a = a;
  cert.b = b;
  if (da == 0 && db == 0) {
    // Two constants: Res = 1 by the empty-product convention regardless of
    // the ideal condition, so decide by integer Bezout instead.
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(),
               a.leading().get_mpz_t(), b.leading().get_mpz_t());
    if (g != 1) return std::nullopt;
    cert.u = IntPoly::constant(u);
    cert.v = IntPoly::constant(v);
    if (!cert.valid()) throw Error("internal: Bezout identity failed");
    return cert;
  }
  if (da == 0 || db == 0) {
    // One side is a constant; |Res| = 1 forces it to be +-1. Invert it.
    if (da == 0) {
      Int c = a.leading();
      if (c != 1 && c != -1) return std::nullopt;
      cert.u = IntPoly::constant(c);  // c * c = 1 for c = +-1
      cert.v = IntPoly();
    } else {
      Int c = b.leading();
      if (c != 1 && c != -1) return std::nullopt;
      cert.u = IntPoly();
      cert.v = IntPoly::constant(c);
    }
    if (!cert.valid()) throw Error("internal: Bezout identity failed");
    return cert;
  }
  // Unknowns: coefficients of u (deg < db) then v (deg < da). Row k encodes
  // the coefficient of t^k in u*a + v*b.
  std::size_t n = static_cast<std::size_t>(da + db);
  QMat sys(n, n);
  for (std::size_t col = 0; col < static_cast<std::size_t>(db); ++col)
    for (int j = 0; j <= da; ++j)
      sys.at(col + static_cast<std::size_t>(j), col) = Rat(a.coeff(static_cast<std::size_t>(j)));
  for (std::size_t col = 0; col < static_cast<std::size_t>(da); ++col)
    for (int j = 0; j <= db; ++j)
      sys.at(col + static_cast<std::size_t>(j), static_cast<std::size_t>(db) + col) =
          Rat(b.coeff(static_cast<std::size_t>(j)));
  std::vector<Rat> rhs(n, Rat(0));
  rhs[0] = 1;
  auto sol = solve_q(std::move(sys), std::move(rhs));
  if (!sol) throw Error("internal: Sylvester system singular despite unit resultant");
  std::vector<Int> uc(static_cast<std::size_t>(db)), vc(static_cast<std::size_t>(da));
  for (std::size_t i = 0; i < uc.size(); ++i) {
    if ((*sol)[i].get_den() != 1)
      throw Error("internal: non-integral Bezout cofactor");
    uc[i] = (*sol)[i].get_num();
  }
  for (std::size_t i = 0; i < vc.size(); ++i) {
    if ((*sol)[uc.size() + i].get_den() != 1)
      throw Error("internal: non-integral Bezout cofactor");
    vc[i] = (*sol)[uc.size() + i].get_num();
  }
  cert.u = IntPoly(std::move(uc));
  cert.v = IntPoly(std::move(vc));
  if (!cert.valid()) throw Error("internal: Bezout identity failed");
  return cert;
}

// Chinese-remainder lift: returns the unique D with D = residue_i mod
// modulus_i and deg D < sum deg modulus_i. Moduli must be monic and pairwise
// strongly coprime; every congruence is re-verified by division before
// returning.
inline IntPoly crt_lift(const std::vector<std::pair<IntPoly, IntPoly>>& pairs) {
  if (pairs.empty()) throw Error("crt_lift needs at least one congruence");
  for (const auto& [m, r] : pairs) {
    (void)r;
    if (!m.is_monic() || m.degree() < 1)
      throw Error("crt_lift moduli must be monic of degree >= 1");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (!strongly_coprime(pairs[i].first, pairs[j].first))
        throw CertificateError("crt_lift: moduli " + pairs[i].first.str() +
                               " and " + pairs[j].first.str() +
                               " are not strongly coprime");
  IntPoly acc_mod = pairs[0].first;
  IntPoly d = mod_monic(pairs[0].second, acc_mod);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const IntPoly& m = pairs[i].first;
    IntPoly r = mod_monic(pairs[i].second, m);
    auto cert = strongly_coprime(acc_mod, m);
    // cert: u*acc_mod + v*m = 1, so u*acc_mod is 1 mod m and 0 mod acc_mod.
    IntPoly next_mod = acc_mod * m;
    IntPoly lifted = d * cert->v * m + r * cert->u * acc_mod;
    d = mod_monic(lifted, next_mod);
    acc_mod = next_mod;
  }
  for (const auto& [m, r] : pairs) {
    if (mod_monic(d, m) != mod_monic(r, m))
      throw Error("internal: CRT lift failed a remainder check");
  }
  return d;
}

}  // namespace otforge
