// SPDX-License-Identifier: Apache-2.0
//
// Dense exact polynomials over Z and Q. Coefficients are stored constant term
// first; the zero polynomial is the empty coefficient vector and has degree -1.
#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "otforge/arith.hpp"
#include "otforge/errors.hpp"

namespace otforge {

class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) {
    normalize();
  }
  IntPoly(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
  }

  static IntPoly zero() { return IntPoly(); }
  static IntPoly one() { return constant(Int(1)); }
  static IntPoly var() { return IntPoly({0, 1}); }
  static IntPoly constant(Int v) {
    IntPoly p;
    if (v != 0) p.c_.push_back(std::move(v));
    return p;
  }
  static IntPoly monomial(Int coeff, std::size_t k) {
    IntPoly p;
    if (coeff != 0) {
      p.c_.assign(k + 1, Int(0));
      p.c_[k] = std::move(coeff);
    }
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }

  Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_constant() const { return c_.size() <= 1; }

  bool operator==(const IntPoly&) const = default;

  IntPoly operator-() const {
    IntPoly r = *this;
    for (Int& v : r.c_) v = -v;
    return r;
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()), Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator*(const Int& s, const IntPoly& a) {
    if (s == 0) return IntPoly();
    IntPoly r = a;
    for (Int& v : r.c_) v *= s;
    return r;
  }
  IntPoly& operator+=(const IntPoly& o) { return *this = *this + o; }
  IntPoly& operator-=(const IntPoly& o) { return *this = *this - o; }
  IntPoly& operator*=(const IntPoly& o) { return *this = *this * o; }

  Int eval(const Int& x) const {
    Int acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) return IntPoly();
    std::vector<Int> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = Int(long(i)) * c_[i];
    return IntPoly(std::move(c));
  }

  // gcd of all coefficients, nonnegative; 0 for the zero polynomial.
  Int content() const {
    Int g(0);
    for (const Int& v : c_) g = gcd_int(g, v);
    return g;
  }
  // p / content(p); keeps the sign of the leading coefficient.
  IntPoly primitive_part() const {
    if (is_zero()) return IntPoly();
    Int g = content();
    IntPoly r = *this;
    for (Int& v : r.c_) v /= g;
    return r;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Int& v = c_[static_cast<std::size_t>(i)];
      if (v == 0) continue;
      if (!out.empty()) out += v > 0 ? "+" : "-";
      else if (v < 0) out += "-";
      Int a = abs_int(v);
      if (a != 1 || i == 0) out += a.get_str();
      if (i > 0) out += i == 1 ? "t" : "t^" + std::to_string(i);
    }
    return out;
  }

 private:
  std::vector<Int> c_;
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
};

class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
    for (Rat& v : c_) v.canonicalize();
    normalize();
  }
  explicit RatPoly(const IntPoly& p) {
    c_.reserve(p.coeffs().size());
    for (const Int& v : p.coeffs()) c_.emplace_back(v);
  }

  static RatPoly zero() { return RatPoly(); }
  static RatPoly constant(Rat v) {
    RatPoly p;
    if (v != 0) p.c_.push_back(std::move(v));
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
  const Rat& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  bool operator==(const RatPoly&) const = default;

  RatPoly operator-() const {
    RatPoly r = *this;
    for (Rat& v : r.c_) v = -v;
    return r;
  }
  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return RatPoly(std::move(c));
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return RatPoly(std::move(c));
  }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(c));
  }
  friend RatPoly operator*(const Rat& s, const RatPoly& a) {
    if (s == 0) return RatPoly();
    RatPoly r = a;
    for (Rat& v : r.c_) v *= s;
    return r;
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RatPoly monic() const {
    if (is_zero()) return RatPoly();
    Rat inv = Rat(1) / leading();
    return inv * *this;
  }

  RatPoly derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rat> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = Rat(long(i)) * c_[i];
    return RatPoly(std::move(c));
  }

  // Multiplies through by the lcm of denominators and removes integer
  // content: the primitive integer polynomial with the same roots.
  IntPoly clear_denominators() const {
    if (is_zero()) return IntPoly();
    Int l(1);
    for (const Rat& v : c_) {
      Int d = v.get_den();
      l = l / gcd_int(l, d) * d;
    }
    std::vector<Int> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      Rat scaled = Rat(l) * c_[i];
      c[i] = scaled.get_num();
    }
    return IntPoly(std::move(c)).primitive_part();
  }

 private:
  std::vector<Rat> c_;
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
};

// Euclidean division over Q[t]: a = q*b + r with deg r < deg b.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<Rat> rem(a.coeffs());
  std::vector<Rat> quo;
  int db = b.degree();
  if (a.degree() >= db) quo.assign(static_cast<std::size_t>(a.degree() - db) + 1, Rat(0));
  for (int i = a.degree(); i >= db; --i) {
    Rat& top = rem[static_cast<std::size_t>(i)];
    if (top == 0) continue;
    Rat f = top / b.leading();
    quo[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(static_cast<std::size_t>(j));
  }
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

// Division with remainder by a monic divisor stays in Z[t].
inline std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b) {
  if (!b.is_monic()) throw Error("divmod_monic requires a monic divisor");
  std::vector<Int> rem(a.coeffs());
  std::vector<Int> quo;
  int db = b.degree();
  if (a.degree() >= db) quo.assign(static_cast<std::size_t>(a.degree() - db) + 1, Int(0));
  for (int i = a.degree(); i >= db; --i) {
    Int f = rem[static_cast<std::size_t>(i)];
    if (f == 0) continue;
    quo[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(static_cast<std::size_t>(j));
  }
  return {IntPoly(std::move(quo)), IntPoly(std::move(rem))};
}

inline IntPoly mod_monic(const IntPoly& a, const IntPoly& b) {
  return divmod_monic(a, b).second;
}

// Exact quotient; throws if b does not divide a in Q[t] (the quotient is
// normalized from the rational division, so non-monic b is fine).
inline IntPoly div_exact(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = divmod(RatPoly(a), RatPoly(b));
  if (!r.is_zero()) throw Error("div_exact: division is not exact");
  std::vector<Int> c(q.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Rat& v = q.coeffs()[i];
    if (v.get_den() != 1) throw Error("div_exact: quotient not integral");
    c[i] = v.get_num();
  }
  return IntPoly(std::move(c));
}

// Pseudo-division: returns (q, r, m) with m * a = q * b + r, deg r < deg b,
// m = lc(b)^(deg a - deg b + 1); m = 1 when deg a < deg b.
inline std::tuple<IntPoly, IntPoly, Int> pseudo_divmod(const IntPoly& a,
                                                       const IntPoly& b) {
  if (b.is_zero()) throw Error("pseudo-division by zero");
  int da = a.degree(), db = b.degree();
  if (da < db) return {IntPoly(), a, Int(1)};
  Int m = pow_int(b.leading(), static_cast<unsigned long>(da - db + 1));
  std::vector<Int> rem(a.coeffs());
  std::vector<Int> quo(static_cast<std::size_t>(da - db) + 1, Int(0));
  // Scale incrementally: one multiplication by lc(b) per step keeps the
  // invariant lc(b)^(steps) * a = quo * b + rem exact over Z.
  for (int i = da; i >= db; --i) {
    Int f = rem[static_cast<std::size_t>(i)];
    for (Int& v : rem) v *= b.leading();
    for (Int& v : quo) v *= b.leading();
    quo[static_cast<std::size_t>(i - db)] += f;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(static_cast<std::size_t>(j));
  }
  return {IntPoly(std::move(quo)), IntPoly(std::move(rem)), m};
}

// gcd over Q[t], normalized to a primitive integer polynomial with positive
// leading coefficient. gcd(p, 0) = primitive part of p.
inline IntPoly gcd_poly(IntPoly a, IntPoly b) {
  if (a.is_zero() && b.is_zero()) return IntPoly();
  a = a.is_zero() ? a : a.primitive_part();
  b = b.is_zero() ? b : b.primitive_part();
  while (!b.is_zero()) {
    auto [q, r, m] = pseudo_divmod(a, b);
    (void)q;
    (void)m;
    a = std::move(b);
    b = r.is_zero() ? IntPoly() : r.primitive_part();
  }
  if (!a.is_zero() && a.leading() < 0) a = -a;
  return a;
}

inline bool is_squarefree(const IntPoly& p) {
  if (p.is_zero()) return false;
  if (p.degree() == 0) return true;
  return gcd_poly(p, p.derivative()).degree() == 0;
}

// Squarefree part: p / gcd(p, p'), primitive with positive leading sign.
inline IntPoly squarefree_part(const IntPoly& p) {
  if (p.is_zero()) throw Error("squarefree_part of zero polynomial");
  IntPoly g = gcd_poly(p, p.derivative());
  IntPoly sf = div_exact(p.primitive_part(), g).primitive_part();
  if (sf.leading() < 0) sf = -sf;
  return sf;
}

// Yun's algorithm: returns pairs (factor_i, i) with p ~ prod factor_i^i over
// Q[t], each factor squarefree, pairwise coprime, primitive, positive leading
// coefficient; constant factors are dropped.
inline std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& p) {
  if (p.is_zero()) throw Error("squarefree decomposition of zero polynomial");
  std::vector<std::pair<IntPoly, int>> out;
  IntPoly f = p.primitive_part();
  if (f.leading() < 0) f = -f;
  if (f.degree() == 0) return out;
  IntPoly g = gcd_poly(f, f.derivative());
  if (g.degree() == 0) {
    out.emplace_back(f, 1);
    return out;
  }
  IntPoly w = div_exact(f, g);
  IntPoly y = div_exact(f.derivative(), g);
  IntPoly z = y - w.derivative();
  int i = 1;
  while (!z.is_zero()) {
    IntPoly h = gcd_poly(w, z);
    if (h.degree() > 0) out.emplace_back(h, i);
    w = div_exact(w, h);
    y = div_exact(z, h);
    z = y - w.derivative();
    ++i;
  }
  if (w.degree() > 0) out.emplace_back(w, i);
  return out;
}

// Extended Euclid over Q[t]: returns monic g = gcd(a, b) and u, v with
// u*a + v*b = g.
inline std::tuple<RatPoly, RatPoly, RatPoly> xgcd(const RatPoly& a, const RatPoly& b) {
  RatPoly r0 = a, r1 = b;
  RatPoly u0 = RatPoly::constant(Rat(1)), u1;
  RatPoly v0, v1 = RatPoly::constant(Rat(1));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    RatPoly u2 = u0 - q * u1;
    RatPoly v2 = v0 - q * v1;
    r0 = std::move(r1);
    r1 = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u2);
    v0 = std::move(v1);
    v1 = std::move(v2);
  }
  if (r0.is_zero()) return {r0, u0, v0};
  Rat inv = Rat(1) / r0.leading();
  return {inv * r0, inv * u0, inv * v0};
}

}  // namespace otforge
