// SPDX-License-Identifier: Apache-2.0
//
// Rational interval arithmetic. Endpoints are exact rationals, so the
// operations here incur no rounding; an interval produced by interval_eval
// is a true enclosure of the polynomial's range over the input interval.

#pragma once

#include <algorithm>
#include <utility>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"
#include "otforge/poly.hpp"

namespace otforge {

struct Interval {
  Rat lo;
  Rat hi;

  Interval() : lo(0), hi(0) {}
  Interval(Rat a, Rat b) : lo(std::move(a)), hi(std::move(b)) {
    if (this->lo > this->hi) throw Error("interval endpoints out of order");
  }

  static Interval point(const Rat& v) { return Interval(v, v); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }

 private:
  static int sgn(const Rat& v) { return sign_of(v); }
};

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo - b.hi, a.hi - b.lo);
}

inline Interval operator*(const Interval& a, const Interval& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return Interval(std::min(std::min(p1, p2), std::min(p3, p4)),
                  std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline Interval intersect(const Interval& a, const Interval& b) {
  Rat lo = std::max(a.lo, b.lo);
  Rat hi = std::min(a.hi, b.hi);
  if (lo > hi) throw Error("intersection of disjoint intervals");
  return Interval(std::move(lo), std::move(hi));
}

// Enclosure of p over x by Horner's scheme in interval arithmetic.
inline Interval interval_eval(const IntPoly& p, const Interval& x) {
  if (p.is_zero()) return Interval::point(Rat(0));
  const auto& c = p.coeffs();
  Interval acc = Interval::point(Rat(c.back()));
  for (std::size_t i = c.size() - 1; i-- > 0;)
    acc = acc * x + Interval::point(Rat(c[i]));
  return acc;
}

}  // namespace otforge
