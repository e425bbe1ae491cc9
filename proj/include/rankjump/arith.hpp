#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankjump {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

/// Raised when an operation receives a value outside its mathematical domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Builds n/d in lowest terms; d must be nonzero.
Rat make_rat(const Int& n, const Int& d = 1);

/// Parses "p", "-p" or "p/q" with decimal integers; throws std::invalid_argument.
Rat parse_rat(const std::string& text);
std::string to_string(const Rat& r);
std::string to_string(const Int& n);

/// Naive height max(|p|, q) of p/q in lowest terms.
Int naive_height(const Rat& r);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const Int& n, const Int& p);
/// p-adic valuation of a nonzero rational (may be negative).
long valuation(const Rat& r, const Int& p);

bool is_probable_prime(const Int& n);

/// Prime factorization of |n| for n != 0, primes ascending.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n);

struct SquarefreeDecomposition {
  Int core;    // squarefree integer carrying the sign of the input
  Rat factor;  // positive rational with input = core * factor^2
};

/// n = core * factor^2 with core squarefree; throws DomainError for n = 0.
SquarefreeDecomposition squarefree_part(const Rat& n);

/// The non-negative square root of n when n is a square in Q.
std::optional<Rat> rational_sqrt(const Rat& n);
inline bool is_square(const Rat& n) { return rational_sqrt(n).has_value(); }

/// Integer square root when n is a perfect square.
std::optional<Int> exact_isqrt(const Int& n);

/// Square root of a modulo an odd prime p (or p = 2); empty if a is a non-residue.
std::optional<Int> sqrt_mod_prime(const Int& a, const Int& p);

/// Square root of a modulo |m| for squarefree m; empty if some prime factor
/// of m sees a as a non-residue.
std::optional<Int> sqrt_mod_squarefree(const Int& a, const Int& m);

/// Hilbert symbol (a, b)_p for nonzero integers; p == 0 denotes the real place.
int hilbert_symbol(const Int& a, const Int& b, const Int& p);

/// Rationals of naive height exactly h, ordered by |numerator|, then
/// denominator, then sign (positive first). Height 1 is {0, 1, -1}.
std::vector<Rat> rationals_of_height(unsigned h);

/// Every rational of height <= bound, in increasing-height order.
std::vector<Rat> rationals_up_to_height(unsigned bound);

}  // namespace rankjump
