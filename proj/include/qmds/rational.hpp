/**
 * @file rational.hpp
 * @brief Exact rational arithmetic helpers on top of GMP's mpq_class.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmds {

using Rat = mpq_class;
using Int = mpz_class;

/// Parse "a/b" or "a" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

/// Render a rational as "a" or "a/b" (canonical form).
inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

/// Exact binomial coefficient C(n, k) for integer n (may be negative), k >= 0.
inline Rat binomial(long n, long k) {
  if (k < 0) return 0;
  Rat acc = 1;
  for (long i = 0; i < k; ++i) {
    acc *= Rat(n - i);
    acc /= Rat(i + 1);
  }
  return acc;
}

/// Exact factorial.
inline Int factorial(long n) {
  Int acc = 1;
  for (long i = 2; i <= n; ++i) acc *= i;
  return acc;
}

/// Floor of log_b(n) style integer power: b^e as a long, throwing on overflow past `cap`.
inline long ipow_capped(long b, long e, long cap) {
  long acc = 1;
  for (long i = 0; i < e; ++i) {
    acc *= b;
    if (acc > cap) throw std::overflow_error("integer power exceeds cap");
  }
  return acc;
}

}  // namespace qmds
