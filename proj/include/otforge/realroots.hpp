// SPDX-License-Identifier: Apache-2.0
//
// Certified real-root machinery: Sturm chains, root counting and isolation,
// exact sign evaluation at real algebraic numbers, and rational enclosures of
// log|q(x)| with directed MPFR rounding. Every answer that leaves this header
// is backed by an exact certificate (a Sturm count or a rational interval),
// never by a floating-point heuristic.

#pragma once

#include <mpfr.h>

#include <optional>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"
#include "otforge/interval.hpp"
#include "otforge/poly.hpp"

namespace otforge {

// Standard Sturm sequence of a squarefree polynomial, computed over Z with
// pseudo-remainders. prem gives lc(b)^{d+1} a = q b + r, so r carries the
// sign of the true remainder exactly when that power is positive; the next
// chain element is -r in that case and +r otherwise, then divided by its
// (positive) content to keep coefficients small. Positive scalings never
// change the sign-variation count.
inline std::vector<IntPoly> sturm_chain(const IntPoly& p) {
  if (p.is_zero()) throw Error("sturm chain of the zero polynomial");
  std::vector<IntPoly> chain;
  chain.push_back(p.primitive_part());
  if (p.degree() == 0) return chain;
  chain.push_back(p.derivative().primitive_part());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    const IntPoly& a = chain[chain.size() - 2];
    const IntPoly& b = chain.back();
    auto [q, r, m] = pseudo_divmod(a, b);
    (void)q;
    if (r.is_zero()) break;
    IntPoly next = (sign_of(m) > 0) ? -r : r;
    chain.push_back(next.primitive_part());
  }
  return chain;
}

inline int sign_variations(const std::vector<IntPoly>& chain, const Rat& x) {
  int count = 0, prev = 0;
  for (const IntPoly& p : chain) {
    int s = sign_of(p.eval(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

// Number of distinct roots of the (squarefree) chain polynomial in (a, b].
inline int sturm_count(const std::vector<IntPoly>& chain, const Rat& a,
                       const Rat& b) {
  if (a > b) throw Error("sturm_count: endpoints out of order");
  return sign_variations(chain, a) - sign_variations(chain, b);
}

// Cauchy bound: every real root of p lies strictly inside (-B, B).
inline Rat cauchy_bound(const IntPoly& p) {
  if (p.is_zero() || p.degree() == 0)
    throw Error("cauchy bound needs a nonconstant polynomial");
  Rat top(abs_int(p.leading()));
  Rat best(0);
  for (int i = 0; i < p.degree(); ++i) {
    Rat c = Rat(abs_int(p.coeff(static_cast<std::size_t>(i)))) / top;
    if (c > best) best = c;
  }
  return best + 1;
}

// A real algebraic number: the unique root of a squarefree defining
// polynomial inside an open rational interval whose endpoints are not roots.
// Since the root is simple, the defining polynomial changes sign across the
// interval, and bisection keeps the invariant cheap to maintain.
class RealAlgebraic {
 public:
  static RealAlgebraic make(IntPoly defpoly, Rat lo, Rat hi) {
    if (defpoly.degree() < 1)
      throw Error("real algebraic number needs a nonconstant polynomial");
    if (!is_squarefree(defpoly))
      throw Error("defining polynomial must be squarefree");
    IntPoly p = defpoly.primitive_part();
    if (p.leading() < 0) p = -p;
    if (!(lo < hi)) throw Error("isolating interval is empty");
    if (sign_of(p.eval(lo)) == 0 || sign_of(p.eval(hi)) == 0)
      throw Error("isolating interval endpoint is a root");
    auto chain = sturm_chain(p);
    if (sturm_count(chain, lo, hi) != 1)
      throw Error("interval does not isolate exactly one root");
    return RealAlgebraic(std::move(p), std::move(lo), std::move(hi));
  }

  const IntPoly& defpoly() const { return defpoly_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Interval interval() const { return Interval(lo_, hi_); }
  Rat width() const { return hi_ - lo_; }
  Rat approx() const { return (lo_ + hi_) / 2; }

  // True when the root is the rational m itself; callers may then shortcut
  // to exact evaluation.
  std::optional<Rat> rational_value() const {
    Rat m = (lo_ + hi_) / 2;
    if (sign_of(defpoly_.eval(m)) == 0) return m;
    return std::nullopt;
  }

  // Halve the isolating interval. The root is simple, so exactly one of the
  // two halves carries the sign change; if the midpoint happens to be the
  // root itself we shrink symmetrically around it instead.
  void refine() {
    Rat m = (lo_ + hi_) / 2;
    int sm = sign_of(defpoly_.eval(m));
    if (sm == 0) {
      Rat d = (hi_ - lo_) / 4;
      lo_ = m - d;
      hi_ = m + d;
      return;
    }
    if (sm == sign_of(defpoly_.eval(lo_)))
      lo_ = std::move(m);
    else
      hi_ = std::move(m);
  }

  void refine_below(const Rat& target_width) {
    if (sign_of(target_width) <= 0)
      throw Error("refinement target must be positive");
    while (width() >= target_width) refine();
  }

 private:
  RealAlgebraic(IntPoly p, Rat lo, Rat hi)
      : defpoly_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {}

  IntPoly defpoly_;
  Rat lo_;
  Rat hi_;
};

// Distinct real roots of p (multiplicities collapsed).
inline int count_real_roots(const IntPoly& p) {
  if (p.is_zero()) throw Error("root count of the zero polynomial");
  IntPoly sf = squarefree_part(p);
  if (sf.degree() < 1) return 0;
  auto chain = sturm_chain(sf);
  Rat b = cauchy_bound(sf);
  return sturm_count(chain, -b, b);
}

// Real roots counted with multiplicity, via the squarefree decomposition.
inline int count_real_roots_weighted(const IntPoly& p) {
  if (p.is_zero()) throw Error("root count of the zero polynomial");
  int total = 0;
  for (const auto& [factor, mult] : squarefree_decomposition(p))
    total += mult * count_real_roots(factor);
  return total;
}

namespace detail {

// Recursive bisection on (a, b] where both endpoints are known non-roots of
// the squarefree sf; appends isolating intervals in ascending order.
inline void isolate_rec(const IntPoly& sf, const std::vector<IntPoly>& chain,
                        const Rat& a, const Rat& b, int count,
                        std::vector<RealAlgebraic>& out) {
  if (count == 0) return;
  if (count == 1) {
    out.push_back(RealAlgebraic::make(sf, a, b));
    return;
  }
  Rat m = (a + b) / 2;
  if (sign_of(sf.eval(m)) != 0) {
    int left = sturm_count(chain, a, m);
    isolate_rec(sf, chain, a, m, left, out);
    isolate_rec(sf, chain, m, b, count - left, out);
    return;
  }
  // The midpoint is itself a (rational) root. Shrink a symmetric window
  // around it until the window contains no other root, then recurse on the
  // two flanks.
  Rat d = (b - a) / 4;
  while (sign_of(sf.eval(m - d)) == 0 || sign_of(sf.eval(m + d)) == 0 ||
         sturm_count(chain, m - d, m + d) != 1)
    d /= 2;
  int left = sturm_count(chain, a, m - d);
  isolate_rec(sf, chain, a, m - d, left, out);
  out.push_back(RealAlgebraic::make(sf, m - d, m + d));
  isolate_rec(sf, chain, m + d, b, count - left - 1, out);
}

}  // namespace detail

// Disjoint isolating intervals for all distinct real roots of p, sorted in
// ascending order of the roots. The defining polynomial of each result is
// the squarefree part of p.
inline std::vector<RealAlgebraic> isolate_real_roots(const IntPoly& p) {
  if (p.is_zero()) throw Error("isolation of the zero polynomial");
  IntPoly sf = squarefree_part(p);
  std::vector<RealAlgebraic> out;
  if (sf.degree() < 1) return out;
  auto chain = sturm_chain(sf);
  // Round the Cauchy bound up to an integer; no root has absolute value
  // that large, so both endpoints are automatically non-roots.
  Rat cb = cauchy_bound(sf);
  Int bi = cb.get_num() / cb.get_den() + 1;
  Rat b(bi);
  int total = sturm_count(chain, -b, b);
  detail::isolate_rec(sf, chain, -b, b, total, out);
  return out;
}

// Exact sign of q at the real algebraic number x. Zero is decided
// symbolically: q(x) = 0 exactly when gcd(defpoly, q) has a root in the
// isolating interval (necessarily x itself). Otherwise the interval is
// refined until the interval evaluation of q excludes zero.
inline int sign_at(const RealAlgebraic& x, const IntPoly& q) {
  if (q.is_zero()) return 0;
  if (q.degree() == 0) return sign_of(q.leading());
  IntPoly g = gcd_poly(x.defpoly(), q);
  if (g.degree() >= 1) {
    auto chain = sturm_chain(g);
    if (sturm_count(chain, x.lo(), x.hi()) == 1) return 0;
  }
  RealAlgebraic y = x;
  for (;;) {
    Interval j = interval_eval(q, y.interval());
    if (!j.contains_zero()) return sign_of(j.lo);
    y.refine();
  }
}

// Total order on real algebraic numbers: -1, 0, +1. Equality is decided
// symbolically (a shared root of the two defining polynomials inside the
// overlap), so refinement always terminates.
inline int compare(const RealAlgebraic& a, const RealAlgebraic& b) {
  RealAlgebraic x = a, y = b;
  for (;;) {
    if (x.hi() <= y.lo()) return -1;
    if (y.hi() <= x.lo()) return 1;
    IntPoly g = gcd_poly(x.defpoly(), y.defpoly());
    if (g.degree() >= 1) {
      Rat lo = x.lo() > y.lo() ? x.lo() : y.lo();
      Rat hi = x.hi() < y.hi() ? x.hi() : y.hi();
      if (lo < hi && sturm_count(sturm_chain(g), lo, hi) == 1) return 0;
    }
    x.refine();
    y.refine();
  }
}

namespace detail {

// log of a positive rational with directed rounding, returned as the exact
// rational value of the MPFR result (scaled significand times a power of
// two), so enclosure endpoints stay exact.
inline Rat log_directed(const Rat& v, mpfr_prec_t bits, mpfr_rnd_t rnd) {
  mpfr_t t;
  mpfr_init2(t, bits);
  mpfr_set_q(t, v.get_mpq_t(), rnd);
  mpfr_log(t, t, rnd);
  Rat out;
  if (!mpfr_zero_p(t)) {
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), t);
    if (e >= 0) {
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
      out = Rat(m * scale);
    } else {
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
      out = Rat(m, scale);
      out.canonicalize();
    }
  }
  mpfr_clear(t);
  return out;
}

}  // namespace detail

// Rational enclosure of log|q(x)| of width at most `precision`. Throws when
// q vanishes at x. The enclosure combines the exact interval evaluation of q
// with downward/upward rounded logarithms; successive rounds intersect, so
// the result only tightens as the interval and working precision grow.
inline Interval log_abs_enclosure(const RealAlgebraic& x, const IntPoly& q,
                                  const Rat& precision) {
  if (sign_of(precision) <= 0) throw Error("enclosure width must be positive");
  int s = sign_at(x, q);
  if (s == 0) throw Error("log_abs_enclosure: polynomial vanishes at the point");
  RealAlgebraic y = x;
  mpfr_prec_t bits = 64;
  std::optional<Interval> acc;
  for (;;) {
    Interval j = interval_eval(q, y.interval());
    if (!j.contains_zero()) {
      Interval a = (s > 0) ? j : Interval(-j.hi, -j.lo);
      Interval enc(detail::log_directed(a.lo, bits, MPFR_RNDD),
                   detail::log_directed(a.hi, bits, MPFR_RNDU));
      acc = acc ? intersect(*acc, enc) : enc;
      if (acc->width() <= precision) return *acc;
    }
    y.refine();
    y.refine();
    bits += 32;
  }
}

}  // namespace otforge
