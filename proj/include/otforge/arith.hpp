// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

namespace otforge {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign_of(const Int& x) { return mpz_sgn(x.get_mpz_t()); }
inline int sign_of(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat pow_rat(const Rat& base, long e) {
  if (e >= 0) {
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(),
               static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(),
               static_cast<unsigned long>(e));
    r.canonicalize();
    return r;
  }
  Rat inv = Rat(base.get_den(), base.get_num());
  inv.canonicalize();
  return pow_rat(inv, -e);
}

inline Int powmod(const Int& base, const Int& e, const Int& mod) {
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return r;
}

namespace detail {
// Returns true when `a` is a Miller-Rabin witness proving `n` composite.
// Requires n odd, n > 3, n - 1 = d * 2^r with d odd.
inline bool mr_composite_witness(const Int& a, const Int& d, unsigned long r,
                                 const Int& n) {
  Int x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned long i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}
}  // namespace detail

// Miller-Rabin primality test over the witness set {2,3,5,7,11,13,17,19,23,
// 29,31,37}. This set is deterministic for every n < 3.317e24, which covers
// all 64-bit inputs with a wide margin. For larger n the same bases act as a
// strong-probable-prime test; the witness set is fixed so results are
// reproducible.
inline bool is_prime(const Int& n) {
  static const long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (long p : bases) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  unsigned long r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (long a : bases) {
    if (detail::mr_composite_witness(Int(a), d, r, n)) return false;
  }
  return true;
}

inline std::string to_decimal(const Int& x) { return x.get_str(10); }

// Rationals serialize as "p/q" (or "p" when q = 1), matching mpq_class.
inline std::string to_decimal(const Rat& x) { return x.get_str(10); }

}  // namespace otforge
