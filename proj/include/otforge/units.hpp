// SPDX-License-Identifier: Apache-2.0
//
// The Dirichlet-family engine. Units of the order Z[t]/B are discovered by
// bounded enumeration and certified by a resultant computation; a log-basis
// among them is selected greedily with interval-certified independence; the
// chosen residues are lifted through the Chinese remainder theorem to a
// family of polynomials, which is then re-verified against the three axioms
// (SL, positivity, log-basis) by an independent checker.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/classify.hpp"
#include "otforge/errors.hpp"
#include "otforge/interval.hpp"
#include "otforge/matrix.hpp"
#include "otforge/poly.hpp"
#include "otforge/realroots.hpp"
#include "otforge/resultant.hpp"

namespace otforge {

// An element of the order Z[t]/modulus, stored as its canonical reduced
// representative.
struct OrderElement {
  IntPoly modulus;
  IntPoly rep;

  static OrderElement make(IntPoly modulus, const IntPoly& raw) {
    if (modulus.degree() < 1 || modulus.leading() != 1)
      throw Error("order modulus must be monic and nonconstant");
    OrderElement e;
    e.rep = mod_monic(raw, modulus);
    e.modulus = std::move(modulus);
    return e;
  }
};

inline OrderElement mul(const OrderElement& x, const OrderElement& y) {
  if (!(x.modulus == y.modulus))
    throw Error("product of elements of different orders");
  return OrderElement::make(x.modulus, x.rep * y.rep);
}

// Unit test by norm: the resultant of the modulus and the representative is
// the norm of the element up to sign, so the element is invertible exactly
// when that value is +-1.
inline bool is_unit(const OrderElement& e) {
  if (e.rep.is_zero()) return false;
  if (e.rep.degree() == 0)
    return e.rep.leading() == 1 || e.rep.leading() == -1;
  Int r = resultant(e.modulus, e.rep);
  return r == 1 || r == -1;
}

struct UnitWithLogs {
  OrderElement elem;
  // One enclosure of log|rep(gamma_j)| per real root gamma_j of the modulus,
  // in ascending root order.
  std::vector<Interval> projected_logs;
  bool positivity = false;
};

struct UnitSearchResult {
  std::vector<UnitWithLogs> units;
  // Elements whose every projected log straddles zero at the search
  // precision. They are set aside rather than used: misclassifying a genuine
  // unit here only shrinks the candidate pool.
  std::vector<UnitWithLogs> torsion_suspects;
};

namespace detail {

inline unsigned thread_cap() {
  if (const char* env = std::getenv("OTFORGE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) return 1;
  return hw < 8 ? hw : 8;
}

// Decode the flat enumeration index into a coefficient vector, constant
// coefficient most significant, so ascending indices give ascending
// lexicographic order on (c_0, ..., c_{d-1}).
inline IntPoly decode_candidate(unsigned long long idx, unsigned long long m,
                                int d, long bound) {
  std::vector<Int> c(static_cast<std::size_t>(d));
  unsigned long long div = 1;
  for (int k = 1; k < d; ++k) div *= m;
  unsigned long long rem = idx;
  for (int k = 0; k < d; ++k) {
    c[static_cast<std::size_t>(k)] =
        Int(static_cast<long>(rem / div) - bound);
    rem %= div;
    if (k + 1 < d) div /= m;
  }
  return IntPoly(std::move(c));
}

inline Rat width_from_bits(long bits) {
  return Rat(1, pow_int(Int(2), static_cast<unsigned long>(bits)));
}

}  // namespace detail

// Enumerate all reduced representatives with coefficients in
// [-coeff_bound, coeff_bound] and keep the ones certified as units,
// excluding +-1. Output order is lexicographic in the coefficient vector
// (constant term most significant) regardless of how many threads ran.
inline UnitSearchResult find_units(const IntPoly& b, const Int& coeff_bound,
                                   long log_bits = 64) {
  if (b.degree() < 1 || b.leading() != 1)
    throw Error("unit search needs a monic nonconstant modulus");
  if (sign_of(coeff_bound) < 0) throw Error("coefficient bound is negative");
  if (coeff_bound > 1000) throw Error("coefficient bound is unreasonably large");
  long bound = static_cast<long>(coeff_bound.get_si());
  int d = b.degree();
  unsigned long long m = static_cast<unsigned long long>(2 * bound + 1);
  unsigned long long total = 1;
  for (int k = 0; k < d; ++k) {
    if (total > (1ull << 62) / m)
      throw Error("unit search space too large for this bound and degree");
    total *= m;
  }

  unsigned threads = detail::thread_cap();
  if (threads > total) threads = static_cast<unsigned>(total);
  std::vector<std::vector<unsigned long long>> found(threads);
  unsigned long long chunk = (total + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    unsigned long long lo = t * chunk;
    unsigned long long hi = std::min(total, lo + chunk);
    pool.emplace_back([&, t, lo, hi]() {
      for (unsigned long long idx = lo; idx < hi; ++idx) {
        IntPoly rep = detail::decode_candidate(idx, m, d, bound);
        if (rep.is_zero()) continue;
        if (rep.degree() == 0) continue;  // only +-1 could pass; excluded
        OrderElement e;
        e.modulus = b;
        e.rep = std::move(rep);
        if (is_unit(e)) found[t].push_back(idx);
      }
    });
  }
  for (auto& th : pool) th.join();

  auto roots = isolate_real_roots(b);
  Rat width = detail::width_from_bits(log_bits);
  UnitSearchResult out;
  for (unsigned t = 0; t < threads; ++t) {
    for (unsigned long long idx : found[t]) {
      UnitWithLogs u;
      u.elem.modulus = b;
      u.elem.rep = detail::decode_candidate(idx, m, d, bound);
      bool all_positive = true;
      bool all_straddle = true;
      for (const auto& r : roots) {
        if (sign_at(r, u.elem.rep) != 1) all_positive = false;
        Interval lg = log_abs_enclosure(r, u.elem.rep, width);
        if (!lg.contains_zero()) all_straddle = false;
        u.projected_logs.push_back(std::move(lg));
      }
      u.positivity = all_positive;
      if (!roots.empty() && all_straddle)
        out.torsion_suspects.push_back(std::move(u));
      else
        out.units.push_back(std::move(u));
    }
  }
  return out;
}

// Replace a unit by its square when it is not positive at every real root.
// Squares are positive at every real embedding, and the projected logs
// simply double.
inline UnitWithLogs make_positive(const UnitWithLogs& u, long log_bits = 64) {
  if (u.positivity) return u;
  UnitWithLogs sq;
  sq.elem = mul(u.elem, u.elem);
  auto roots = isolate_real_roots(u.elem.modulus);
  Rat width = detail::width_from_bits(log_bits);
  for (const auto& r : roots) {
    if (sign_at(r, sq.elem.rep) != 1)
      throw Error("internal: square of a unit is not positive");
    sq.projected_logs.push_back(log_abs_enclosure(r, sq.elem.rep, width));
  }
  sq.positivity = true;
  return sq;
}

namespace detail {

// Certified full-rank test for a set of rows of intervals, by fraction-free
// interval elimination. Returns true only when every row produced a pivot
// interval excluding zero; false means "could not certify at this
// precision", not "dependent".
inline bool certify_rows_independent(std::vector<std::vector<Interval>> rows) {
  std::size_t k = rows.size();
  if (k == 0) return true;
  std::size_t l = rows[0].size();
  if (k > l) return false;
  std::vector<bool> used(l, false);
  for (std::size_t r = 0; r < k; ++r) {
    std::size_t piv = l;
    for (std::size_t c = 0; c < l; ++c)
      if (!used[c] && !rows[r][c].contains_zero()) {
        piv = c;
        break;
      }
    if (piv == l) return false;
    used[piv] = true;
    for (std::size_t i = r + 1; i < k; ++i)
      for (std::size_t j = 0; j < l; ++j)
        if (j != piv)
          rows[i][j] = rows[i][j] * rows[r][piv] - rows[i][piv] * rows[r][j];
    for (std::size_t i = r + 1; i < k; ++i) rows[i][piv] = Interval();
  }
  return true;
}

// Interval determinant by cofactor expansion along the first row; fine for
// the small orders this library meets.
inline Interval interval_det(const std::vector<std::vector<Interval>>& m) {
  std::size_t n = m.size();
  if (n == 0) return Interval::point(Rat(1));
  if (n == 1) return m[0][0];
  Interval acc = Interval::point(Rat(0));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Interval>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Interval> row;
      row.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    Interval term = m[0][c] * interval_det(minor);
    if (c % 2 == 1) term = Interval(-term.hi, -term.lo);
    acc = acc + term;
  }
  return acc;
}

}  // namespace detail

enum class LogBasisStatus { ok, undetermined, insufficient };

struct LogBasisResult {
  LogBasisStatus status = LogBasisStatus::insufficient;
  std::vector<UnitWithLogs> basis;
  Interval det_enclosure;
  long precision_bits = 0;
  std::string message;
};

// Greedy selection of l units whose projected-log rows are certifiably
// independent. Candidates are made positive and deduplicated first, then
// scanned in order; an ambiguous candidate triggers precision escalation up
// to the budget and is skipped if still ambiguous. Deterministic for fixed
// inputs and budget.
inline LogBasisResult select_log_basis(const std::vector<UnitWithLogs>& units,
                                       int l, long budget_bits) {
  LogBasisResult out;
  if (l < 1) throw Error("log basis size must be positive");
  if (budget_bits < 64) budget_bits = 64;
  if (units.empty()) {
    out.message = "no candidate units; raise the coefficient bound";
    return out;
  }
  const IntPoly& modulus = units.front().elem.modulus;
  for (const auto& u : units) {
    if (!(u.elem.modulus == modulus))
      throw Error("log basis candidates live in different orders");
    if (static_cast<int>(u.projected_logs.size()) != l)
      throw Error("projected log length does not match requested basis size");
  }
  auto roots = isolate_real_roots(modulus);
  if (static_cast<int>(roots.size()) != l)
    throw Error("basis size must equal the number of real roots");

  std::vector<UnitWithLogs> cands;
  for (const auto& u : units) {
    UnitWithLogs p = make_positive(u);
    bool dup = false;
    for (const auto& c : cands)
      if (c.elem.rep == p.elem.rep) {
        dup = true;
        break;
      }
    if (!dup && !(p.elem.rep == IntPoly::one()))
      cands.push_back(std::move(p));
  }

  long bits = 64;
  auto recompute = [&](UnitWithLogs& u) {
    Rat w = detail::width_from_bits(bits);
    for (int j = 0; j < l; ++j)
      u.projected_logs[static_cast<std::size_t>(j)] = log_abs_enclosure(
          roots[static_cast<std::size_t>(j)], u.elem.rep, w);
  };

  std::vector<UnitWithLogs> chosen;
  bool ambiguous_skipped = false;
  for (auto& cand : cands) {
    if (static_cast<int>(chosen.size()) == l) break;
    for (;;) {
      std::vector<std::vector<Interval>> rows;
      for (const auto& c : chosen) rows.push_back(c.projected_logs);
      rows.push_back(cand.projected_logs);
      if (detail::certify_rows_independent(std::move(rows))) {
        chosen.push_back(cand);
        break;
      }
      if (bits >= budget_bits) {
        ambiguous_skipped = true;
        break;
      }
      bits = std::min(budget_bits, bits * 2);
      for (auto& c : chosen) recompute(c);
      recompute(cand);
    }
  }

  if (static_cast<int>(chosen.size()) < l) {
    out.status = ambiguous_skipped ? LogBasisStatus::undetermined
                                   : LogBasisStatus::insufficient;
    out.message = ambiguous_skipped
                      ? "independence undetermined within the precision budget"
                      : "not enough independent units; raise the coefficient "
                        "bound";
    out.precision_bits = bits;
    return out;
  }

  for (;;) {
    std::vector<std::vector<Interval>> rows;
    for (const auto& c : chosen) rows.push_back(c.projected_logs);
    Interval det = detail::interval_det(rows);
    if (!det.contains_zero()) {
      out.status = LogBasisStatus::ok;
      out.basis = chosen;
      out.det_enclosure = det;
      out.precision_bits = bits;
      return out;
    }
    if (bits >= budget_bits) {
      out.status = LogBasisStatus::undetermined;
      out.message = "log determinant sign undetermined within the budget";
      out.precision_bits = bits;
      return out;
    }
    bits = std::min(budget_bits, bits * 2);
    for (auto& c : chosen) recompute(c);
  }
}

enum class Delta3Status { certified, violated, undetermined };

// A (candidate) Dirichlet family together with everything the verifier
// computed about it.
struct DirichletFamily {
  std::vector<IntPoly> polys;
  std::vector<Int> dets;                // det D_i(M), in family order
  std::vector<std::vector<int>> signs;  // signs[i][j] = sign of D_i(alpha_j)
  Interval log_det;
  long precision_bits = 0;
  Delta3Status delta3 = Delta3Status::undetermined;
  bool accepted = false;
  int failed_axiom = 0;  // 0 = none, otherwise 1, 2 or 3 (first failure)
  std::string message;
};

// Remark-3.8 transformation: squaring every member fixes signs while
// preserving the SL and log-basis properties.
inline std::vector<IntPoly> square_family(const std::vector<IntPoly>& polys) {
  std::vector<IntPoly> out;
  out.reserve(polys.size());
  for (const IntPoly& p : polys) out.push_back(p * p);
  return out;
}

// Independent checker for the three axioms, in fixed order; the first
// failing axiom is reported. Delta-3 is tri-state: an exactly-zero
// determinant enclosure is a violation, an enclosure that merely straddles
// zero at the full budget is undetermined.
inline DirichletFamily verify_dirichlet(const ZMat& m,
                                        const std::vector<IntPoly>& polys,
                                        long budget_bits = 256) {
  if (m.rows() != m.cols()) throw Error("verification needs a square matrix");
  if (budget_bits < 64) budget_bits = 64;
  DirichletFamily fam;
  fam.polys = polys;
  IntPoly cp = char_poly(m);
  auto roots = isolate_real_roots(cp);
  std::size_t s = roots.size();
  if (polys.size() != s) {
    fam.message = "family size " + std::to_string(polys.size()) +
                  " does not match the count of real eigenvalues " +
                  std::to_string(s);
    return fam;
  }
  if (s == 0) {
    fam.message = "matrix has no real eigenvalue";
    return fam;
  }

  // Axiom 1: every D_i(M) is in SL.
  for (std::size_t i = 0; i < s; ++i) {
    ZMat ni = poly_at(polys[i], m);
    Int det = det_bareiss(ni);
    fam.dets.push_back(det);
    if (det != 1) {
      fam.failed_axiom = 1;
      fam.message = "member " + std::to_string(i + 1) +
                    " evaluates to determinant " + to_decimal(det);
      return fam;
    }
  }

  // Axiom 2: positivity at every real eigenvalue.
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<int> row;
    for (std::size_t j = 0; j < s; ++j)
      row.push_back(sign_at(roots[j], polys[i]));
    fam.signs.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (fam.signs[i][j] != 1) {
        fam.failed_axiom = 2;
        fam.message = "member " + std::to_string(i + 1) +
                      " is not positive at real eigenvalue " +
                      std::to_string(j + 1);
        return fam;
      }

  // Axiom 3: the log matrix is nonsingular, certified by an interval
  // determinant.
  long bits = 64;
  for (;;) {
    Rat w = detail::width_from_bits(bits);
    std::vector<std::vector<Interval>> logs(s, std::vector<Interval>(s));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        logs[i][j] = log_abs_enclosure(roots[j], polys[i], w);
    Interval det = detail::interval_det(logs);
    fam.log_det = det;
    fam.precision_bits = bits;
    if (!det.contains_zero()) {
      fam.delta3 = Delta3Status::certified;
      fam.accepted = true;
      return fam;
    }
    if (det.is_point()) {
      // Exactly zero: genuinely singular (e.g. a member identically 1).
      fam.delta3 = Delta3Status::violated;
      fam.failed_axiom = 3;
      fam.message = "log matrix is exactly singular";
      return fam;
    }
    if (bits >= budget_bits) {
      fam.delta3 = Delta3Status::undetermined;
      fam.failed_axiom = 3;
      fam.message = "log determinant sign undetermined within the budget";
      return fam;
    }
    bits = std::min(budget_bits, bits * 2);
  }
}

struct FamilyBuildOptions {
  Int coeff_bound = 8;
  long precision_bits = 256;
  bool primary = true;
  // Custom residues modulo b0, one per family member in canonical (factor,
  // unit) order; ignored in primary mode.
  std::vector<IntPoly> custom_e;
};

// Construct a Dirichlet family for a type-J matrix: per factor B_j, find a
// log-basis of positive units, then lift each selected residue P through the
// congruences D = E mod B0, D = P mod B_j, D = 1 mod the other factors. The
// result is accepted only after the independent verifier signs off.
inline DirichletFamily build_dirichlet_family(const ZMat& m,
                                              const FactoredCharPoly& f,
                                              const FamilyBuildOptions& opt) {
  TypeCertificate cert = check_type_j(m, f);
  if (!cert.j) {
    if (cert.witness_unknown && !cert.definite_failure)
      throw UnknownIrreducibility(
          "cannot build a family: " + cert.failure);
    throw CertificateError("matrix is not of type J: " + cert.failure);
  }

  bool skip_b0 = f.b0.degree() < 1;
  std::size_t s_total = 0;
  std::vector<std::size_t> l_per_factor;
  for (const IntPoly& b : f.factors) {
    std::size_t l = static_cast<std::size_t>(count_real_roots(b));
    l_per_factor.push_back(l);
    s_total += l;
  }

  // Residues modulo b0 for each family member.
  std::vector<IntPoly> e_polys;
  if (opt.primary) {
    if (!skip_b0) {
      Int c0 = f.b0.eval(Int(0));
      if (c0 != 1 && c0 != -1)
        throw CertificateError(
            "primary mode needs t invertible modulo b0, but b0(0) = " +
            to_decimal(c0));
    }
    e_polys.assign(s_total, IntPoly::var());
  } else {
    if (opt.custom_e.size() != s_total)
      throw Error("custom residue list must have one entry per family member");
    for (const IntPoly& e : opt.custom_e) {
      if (skip_b0) continue;
      if (e.is_zero())
        throw CertificateError("custom residue is zero, not invertible");
      Int r = e.degree() == 0 ? pow_int(e.leading(),
                                        static_cast<unsigned long>(
                                            f.b0.degree()))
                              : resultant(f.b0, e);
      if (r != 1 && r != -1)
        throw CertificateError("custom residue " + e.str() +
                               " is not invertible modulo b0");
    }
    e_polys = opt.custom_e;
  }

  // Per factor: escalate the coefficient bound until a log-basis is found.
  std::vector<IntPoly> family;
  std::size_t member = 0;
  for (std::size_t fj = 0; fj < f.factors.size(); ++fj) {
    const IntPoly& bj = f.factors[fj];
    std::size_t l = l_per_factor[fj];
    if (l == 0)
      throw CertificateError("factor " + bj.str() + " has no real root");
    LogBasisResult sel;
    for (Int bound(1); bound <= opt.coeff_bound; ++bound) {
      UnitSearchResult found = find_units(bj, bound);
      sel = select_log_basis(found.units, static_cast<int>(l),
                             opt.precision_bits);
      if (sel.status == LogBasisStatus::ok) break;
    }
    if (sel.status != LogBasisStatus::ok) {
      std::string why = sel.status == LogBasisStatus::undetermined
                            ? "the log-basis certification ran out of "
                              "precision budget"
                            : "no unit log-basis found";
      throw SearchExhausted(why + " for factor " + bj.str() +
                            " at coefficient bound " +
                            to_decimal(opt.coeff_bound) +
                            "; raise --coeff-bound");
    }
    for (std::size_t i = 0; i < l; ++i) {
      std::vector<std::pair<IntPoly, IntPoly>> congruences;
      if (!skip_b0) congruences.emplace_back(f.b0, e_polys[member]);
      congruences.emplace_back(bj, sel.basis[i].elem.rep);
      for (std::size_t mu = 0; mu < f.factors.size(); ++mu)
        if (mu != fj) congruences.emplace_back(f.factors[mu], IntPoly::one());
      family.push_back(crt_lift(congruences));
      ++member;
    }
  }

  DirichletFamily fam = verify_dirichlet(m, family, opt.precision_bits);
  if (!fam.accepted) {
    std::string axiom =
        fam.failed_axiom > 0 ? std::to_string(fam.failed_axiom) : "shape";
    throw CertificateError(
        "internal inconsistency: constructed family fails axiom " + axiom +
        " (" + fam.message + ")");
  }
  return fam;
}

}  // namespace otforge
