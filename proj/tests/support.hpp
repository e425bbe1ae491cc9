#pragma once

// Shared helpers for the test suites: seeded randomness and small exact oracles.

#include "rankjump/poly.hpp"

#include <random>
#include <vector>

namespace testing {

using rankjump::Int;
using rankjump::Rat;
using rankjump::RatPoly;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

/// p/q with |p| <= bound, 1 <= q <= bound.
inline Rat random_rat(long bound) { return Rat(uniform(-bound, bound)) / Rat(uniform(1, bound)); }

inline Rat random_nonzero_rat(long bound) {
  for (;;) {
    Rat r = random_rat(bound);
    if (r != 0) return r;
  }
}

/// Exactly `degree` when lead_nonzero, coefficients of height <= bound.
inline RatPoly random_poly(int degree, long bound, bool lead_nonzero = true) {
  std::vector<Rat> c;
  for (int i = 0; i <= degree; ++i) c.push_back(random_rat(bound));
  if (lead_nonzero && c.back() == 0) c.back() = Rat(1);
  return RatPoly(std::move(c));
}

/// Trial-division factorization of |n|.
inline std::vector<std::pair<Int, unsigned>> trial_factor(Int n) {
  if (n < 0) n = -n;
  std::vector<std::pair<Int, unsigned>> out;
  for (Int p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Determinant of a square rational matrix by fraction-exact elimination.
inline Rat determinant(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace testing
