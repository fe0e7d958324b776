// SPDX-License-Identifier: Apache-2.0
//
// Topological invariants of T(M, D) and the obstruction verdicts assembled
// from them: minimal polynomials and diagonalizability over Q, specialness
// witnesses for the monodromy group, the first Betti number through the
// specialness route, and the combined no-LCK / not-OT report.
//
// Witness search order, fixed once: exponent vectors are graded by the sum
// of absolute values, and within a grade enumerated lexicographically with
// the per-entry order 0, 1, -1, 2, -2, ...  The winner is the first vector
// in this order whose product matrix provably has no eigenvalue 1, so the
// result does not depend on the thread cap.

#pragma once

#include <atomic>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
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

namespace detail {

// Monic annihilator of v under a: the lowest-degree monic g with g(a)v = 0.
// Krylov iterates are reduced incrementally, and every echelon row carries
// its expression in terms of the original iterates, so the first dependence
// yields the coefficients directly. The reductions never touch the newest
// coordinate, which therefore stays 1: the result is monic by construction.
inline RatPoly krylov_annihilator(const QMat& a, std::vector<Rat> v) {
  std::size_t n = a.rows();
  struct Row {
    std::vector<Rat> w;  // reduced iterate, pivot entry normalized to 1
    std::size_t piv = 0;
    std::vector<Rat> c;  // w written in the iterates v_0 .. v_j
  };
  std::vector<Row> rows;
  std::vector<Rat> cur = std::move(v);
  for (std::size_t j = 0; j <= n; ++j) {
    std::vector<Rat> w = cur;
    std::vector<Rat> coords(j + 1, Rat(0));
    coords[j] = 1;
    for (const Row& r : rows) {
      Rat f = w[r.piv];
      if (f == 0) continue;
      for (std::size_t i = 0; i < n; ++i) w[i] -= f * r.w[i];
      for (std::size_t i = 0; i < r.c.size(); ++i) coords[i] -= f * r.c[i];
    }
    std::size_t piv = 0;
    while (piv < n && w[piv] == 0) ++piv;
    if (piv == n) return RatPoly(std::move(coords));
    Rat inv = Rat(1) / w[piv];
    for (std::size_t i = 0; i < n; ++i) w[i] *= inv;
    for (Rat& x : coords) x *= inv;
    rows.push_back(Row{std::move(w), piv, std::move(coords)});
    std::vector<Rat> nxt(n, Rat(0));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        if (a.at(r, k) != 0) nxt[r] += a.at(r, k) * cur[k];
    cur = std::move(nxt);
  }
  throw Error("no Krylov dependence within n + 1 iterates");
}

inline RatPoly lcm_poly(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return RatPoly();
  RatPoly g = std::get<0>(xgcd(a, b));
  return divmod(a * b, g).first.monic();
}

inline std::string format_exponents(const std::vector<long>& e) {
  std::string out = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(e[i]);
  }
  return out + ")";
}

}  // namespace detail

// Monic minimal polynomial over Q: the lcm of the per-basis-vector Krylov
// annihilators, confirmed by exact evaluation at the matrix.
inline RatPoly minimal_polynomial(const QMat& a) {
  if (!a.is_square()) throw Error("minimal polynomial of a non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return RatPoly::constant(Rat(1));
  RatPoly mp = RatPoly::constant(Rat(1));
  for (std::size_t k = 0; k < n && mp.degree() < static_cast<int>(n); ++k) {
    std::vector<Rat> e(n, Rat(0));
    e[k] = 1;
    mp = detail::lcm_poly(mp, detail::krylov_annihilator(a, std::move(e)));
  }
  QMat acc(n, n);
  for (int i = mp.degree(); i >= 0; --i) {
    acc = acc * a;
    Rat ci = mp.coeff(static_cast<std::size_t>(i));
    for (std::size_t d = 0; d < n; ++d) acc.at(d, d) += ci;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (acc.at(i, j) != 0)
        throw Error("minimal polynomial candidate fails to annihilate");
  return mp;
}

inline RatPoly minimal_polynomial(const ZMat& a) {
  return minimal_polynomial(to_rational(a));
}

// Diagonalizable over C exactly when the minimal polynomial is squarefree,
// i.e. coprime to its derivative. Decided entirely over Q.
inline bool is_diagonalizable(const QMat& a) {
  RatPoly mp = minimal_polynomial(a);
  RatPoly g = std::get<0>(xgcd(mp, mp.derivative()));
  return g.degree() <= 0;
}

inline bool is_diagonalizable(const ZMat& a) {
  return is_diagonalizable(to_rational(a));
}

// An exponent vector n with N = prod_i D_i(M^T)^{n_i} having no eigenvalue
// 1, certified by the exact nonzero integer det(N - I).
struct SpecialnessWitness {
  std::vector<long> exponents;
  ZMat n;
  Int det_minus_one;
};

// Searches exponent vectors with |n_i| <= search_bound in the canonical
// graded order for the first certified witness. A log-matrix guide prunes
// candidates that certainly fail: when every member is positive at every
// real eigenvalue, the eigenvalue of N attached to a real root alpha_j is
// the positive unit prod_i D_i(alpha_j)^{n_i}, and a sum of log enclosures
// that collapses to the exact point 0 proves it equals 1. Candidates whose
// enclosures merely straddle 0 are still decided by the exact determinant,
// so the guide never changes the outcome, only the work.
//
// Exact determinant evaluations inside one grade may run on several threads
// (capped by OTFORGE_THREADS); the merge picks the smallest candidate index
// that succeeded, keeping the canonical order.
inline std::optional<SpecialnessWitness> find_specialness_witness(
    const ZMat& m, const std::vector<IntPoly>& polys, long search_bound = 3) {
  if (!m.is_square()) throw Error("witness search needs a square matrix");
  if (search_bound < 1) throw Error("search bound must be at least 1");
  std::size_t s = polys.size();
  if (s == 0) return std::nullopt;

  ZMat mt = m.transpose();
  std::vector<ZMat> pow_pos, pow_neg;
  pow_pos.reserve(s);
  pow_neg.reserve(s);
  for (const IntPoly& d : polys) {
    ZMat di = poly_at(d, mt);
    auto inv = inverse_unimodular(di);
    if (!inv)
      throw CertificateError(
          "monodromy matrix is not unimodular; witness search needs a "
          "verified family");
    pow_pos.push_back(std::move(di));
    pow_neg.push_back(std::move(*inv));
  }

  auto roots = isolate_real_roots(char_poly(m));
  bool guide = !roots.empty();
  for (std::size_t i = 0; i < s && guide; ++i)
    for (const RealAlgebraic& r : roots)
      if (sign_at(r, polys[i]) != 1) {
        guide = false;
        break;
      }
  std::vector<std::vector<Interval>> logs;
  if (guide) {
    Rat w = detail::width_from_bits(64);
    logs.assign(s, {});
    for (std::size_t i = 0; i < s; ++i)
      for (const RealAlgebraic& r : roots)
        logs[i].push_back(log_abs_enclosure(r, polys[i], w));
  }

  auto evaluate =
      [&](const std::vector<long>& v) -> std::optional<SpecialnessWitness> {
    ZMat prod = ZMat::identity(m.rows());
    for (std::size_t i = 0; i < s; ++i) {
      const ZMat& step = v[i] >= 0 ? pow_pos[i] : pow_neg[i];
      for (long k = 0; k < std::labs(v[i]); ++k) prod = prod * step;
    }
    Int d = det_bareiss(prod - ZMat::identity(m.rows()));
    if (d == 0) return std::nullopt;
    return SpecialnessWitness{v, std::move(prod), std::move(d)};
  };

  std::size_t radix = static_cast<std::size_t>(2 * search_bound + 1);
  auto value_of = [](std::size_t u) -> long {
    long k = static_cast<long>((u + 1) / 2);
    return (u % 2 == 1) ? k : -k;
  };

  unsigned cap = detail::thread_cap();
  for (long grade = 1; grade <= search_bound * static_cast<long>(s); ++grade) {
    std::vector<std::vector<long>> cand;
    std::vector<std::size_t> idx(s, 0);
    for (;;) {
      long g = 0;
      std::vector<long> v(s);
      for (std::size_t i = 0; i < s; ++i) {
        v[i] = value_of(idx[i]);
        g += std::labs(v[i]);
      }
      if (g == grade) {
        bool pruned = false;
        for (std::size_t j = 0; guide && j < roots.size() && !pruned; ++j) {
          Interval sum = Interval::point(Rat(0));
          for (std::size_t i = 0; i < s; ++i)
            sum = sum + Interval::point(Rat(v[i])) * logs[i][j];
          pruned = sum.is_point() && sum.lo == 0;
        }
        if (!pruned) cand.push_back(std::move(v));
      }
      std::size_t p = s;
      while (p > 0 && ++idx[p - 1] == radix) idx[--p] = 0;
      if (p == 0) break;
    }

    if (cap <= 1 || cand.size() < 2) {
      for (const std::vector<long>& v : cand)
        if (auto found = evaluate(v)) return found;
    } else {
      std::vector<std::optional<SpecialnessWitness>> results(cand.size());
      std::atomic<std::size_t> next{0};
      std::atomic<std::size_t> first_hit{cand.size()};
      auto worker = [&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= cand.size()) return;
          if (i > first_hit.load()) continue;
          results[i] = evaluate(cand[i]);
          if (results[i]) {
            std::size_t cur = first_hit.load();
            while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
            }
          }
        }
      };
      unsigned nt = static_cast<unsigned>(
          std::min<std::size_t>(cap, cand.size()));
      std::vector<std::thread> pool;
      for (unsigned t = 0; t + 1 < nt; ++t) pool.emplace_back(worker);
      worker();
      for (std::thread& t : pool) t.join();
      for (std::optional<SpecialnessWitness>& r : results)
        if (r) return std::move(r);
    }
  }
  return std::nullopt;
}

struct BettiResult {
  std::optional<int> b1;
  std::vector<std::string> justification;
};

// First Betti number through the specialness route only. The witness is
// revalidated from scratch (product matrix and determinant recomputed); a
// missing or invalid witness yields unknown, never a guess.
inline BettiResult betti1(const ZMat& m, const std::vector<IntPoly>& polys,
                          const std::optional<SpecialnessWitness>& witness) {
  BettiResult out;
  if (!witness) {
    out.justification.push_back(
        "no specialness witness; b1 is reported as unknown");
    return out;
  }
  const SpecialnessWitness& w = *witness;
  if (w.exponents.size() != polys.size()) {
    out.justification.push_back(
        "witness rejected: exponent count does not match the family");
    return out;
  }
  ZMat mt = m.transpose();
  ZMat prod = ZMat::identity(m.rows());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    ZMat di = poly_at(polys[i], mt);
    ZMat step;
    if (w.exponents[i] >= 0) {
      step = std::move(di);
    } else {
      auto inv = inverse_unimodular(di);
      if (!inv) {
        out.justification.push_back(
            "witness rejected: a monodromy matrix is not unimodular");
        return out;
      }
      step = std::move(*inv);
    }
    for (long k = 0; k < std::labs(w.exponents[i]); ++k) prod = prod * step;
  }
  if (!(prod == w.n)) {
    out.justification.push_back(
        "witness rejected: recomputed product matrix differs");
    return out;
  }
  Int d = det_bareiss(prod - ZMat::identity(m.rows()));
  if (d == 0 || d != w.det_minus_one) {
    out.justification.push_back("witness rejected: recomputed det(N - I) = " +
                                to_decimal(d) + " does not certify");
    return out;
  }
  out.b1 = static_cast<int>(polys.size());
  out.justification.push_back(
      "witness revalidated: n = " + detail::format_exponents(w.exponents) +
      ", det(N - I) = " + to_decimal(d) +
      "; no product of monodromies fixes a lattice vector");
  out.justification.push_back(
      "special family: b1 equals the rank of the acting lattice, s = " +
      std::to_string(polys.size()));
  return out;
}

enum class LckVerdict { no_lck, inconclusive };
enum class OtVerdict { not_ot_homeomorphic, inconclusive };

struct ObstructionOptions {
  long search_bound = 3;
  long budget_bits = 256;
};

struct ObstructionReport {
  bool primary_flag = false;
  std::optional<SpecialnessWitness> special;
  std::optional<int> b1;
  std::vector<std::size_t> nondiag_indices;  // i with D_i(M) not diagonalizable
  LckVerdict verdict_lck = LckVerdict::inconclusive;
  OtVerdict verdict_ot = OtVerdict::inconclusive;
  std::vector<std::string> justification;
};

// Assembles the verdicts strictly from their hypotheses: no-LCK needs a
// primary family with some D_i(M) non-diagonalizable, not-OT needs a special
// family with some D_i(M) non-diagonalizable; anything else stays
// inconclusive. Refuses to run without the upstream certificates (type J for
// the matrix, accepted Dirichlet verification for the family).
inline ObstructionReport obstruction_report(const ZMat& m,
                                            const FactoredCharPoly& f,
                                            const std::vector<IntPoly>& polys,
                                            const ObstructionOptions& opt = {}) {
  TypeCertificate cert = check_type_j(m, f);
  if (!cert.j)
    throw CertificateError(
        "obstruction report requires a type-J matrix: " +
        (cert.failure.empty() ? std::string("type undetermined")
                              : cert.failure));
  DirichletFamily fam = verify_dirichlet(m, polys, opt.budget_bits);
  if (!fam.accepted)
    throw CertificateError(
        "obstruction report requires a verified Dirichlet family: " +
        fam.message);

  ObstructionReport rep;
  if (f.b0.degree() < 1) {
    rep.primary_flag = true;
    rep.justification.push_back(
        "real-root-free part is constant; the primary congruence is vacuous");
  } else {
    rep.primary_flag = true;
    for (const IntPoly& d : polys)
      if (!mod_monic(d - IntPoly::var(), f.b0).is_zero()) {
        rep.primary_flag = false;
        break;
      }
    rep.justification.push_back(
        rep.primary_flag
            ? "primary family: every member is congruent to t modulo " +
                  f.b0.str()
            : "not primary: a member is not congruent to t modulo " +
                  f.b0.str());
  }

  for (std::size_t i = 0; i < polys.size(); ++i)
    if (!is_diagonalizable(poly_at(polys[i], m)))
      rep.nondiag_indices.push_back(i);
  if (rep.nondiag_indices.empty()) {
    rep.justification.push_back("every D_i(M) is diagonalizable over C");
  } else {
    std::string which;
    for (std::size_t i : rep.nondiag_indices) {
      if (!which.empty()) which += ", ";
      which += "D_" + std::to_string(i + 1) + "(M)";
    }
    rep.justification.push_back(
        which + (rep.nondiag_indices.size() == 1 ? " is" : " are") +
        " not diagonalizable over C (minimal polynomial not squarefree)");
  }

  rep.special = find_specialness_witness(m, polys, opt.search_bound);
  if (!rep.special)
    rep.justification.push_back(
        "no specialness witness found with |n_i| <= " +
        std::to_string(opt.search_bound));
  BettiResult betti = betti1(m, polys, rep.special);
  rep.b1 = betti.b1;
  for (std::string& line : betti.justification)
    rep.justification.push_back(std::move(line));

  if (rep.primary_flag && !rep.nondiag_indices.empty()) {
    rep.verdict_lck = LckVerdict::no_lck;
    rep.justification.push_back(
        "verdict: no LCK structure (primary family, non-diagonalizable "
        "member evaluation)");
  } else {
    rep.justification.push_back(
        "LCK verdict inconclusive: needs a primary family together with a "
        "non-diagonalizable D_i(M)");
  }
  if (rep.special && !rep.nondiag_indices.empty()) {
    rep.verdict_ot = OtVerdict::not_ot_homeomorphic;
    rep.justification.push_back(
        "verdict: not homeomorphic to any OT manifold (special family, "
        "non-diagonalizable member evaluation; the OT side would force "
        "diagonalizable monodromy)");
  } else {
    rep.justification.push_back(
        "OT comparison inconclusive: needs a specialness witness together "
        "with a non-diagonalizable D_i(M)");
  }
  return rep;
}

}  // namespace otforge
