#pragma once

// Dense univariate polynomials over Q and places of Q(t).

#include "rankjump/arith.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace rankjump {

struct UnsupportedDegree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Polynomial with rational coefficients, constant term first and no trailing
/// zero coefficient. The zero polynomial has no coefficients and degree -1.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs);
  RatPoly(std::initializer_list<Rat> coeffs);
  static RatPoly constant(const Rat& c);
  /// x - root
  static RatPoly linear_root(const Rat& root);
  static RatPoly monomial(const Rat& c, unsigned degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  Rat coeff(unsigned i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }
  Rat lead() const { return is_zero() ? Rat(0) : coeffs_.back(); }

  Rat operator()(const Rat& x) const;
  RatPoly derivative() const;
  RatPoly monic() const;
  /// p(q(t))
  RatPoly compose(const RatPoly& q) const;
  RatPoly pow(unsigned n) const;

  RatPoly& operator+=(const RatPoly& o);
  RatPoly& operator-=(const RatPoly& o);
  RatPoly& operator*=(const RatPoly& o);
  RatPoly& operator*=(const Rat& c);

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(RatPoly a, const RatPoly& b) { return a *= b; }
  friend RatPoly operator*(RatPoly a, const Rat& c) { return a *= c; }
  friend RatPoly operator*(const Rat& c, RatPoly a) { return a *= c; }
  friend RatPoly operator-(RatPoly a) { return a *= Rat(-1); }
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const RatPoly& a, const RatPoly& b) { return !(a == b); }
  /// Total order used for canonical sorting (degree first, then coefficients).
  friend bool operator<(const RatPoly& a, const RatPoly& b);

  std::string str(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Rat> coeffs_;
};

struct DivRem {
  RatPoly quotient;
  RatPoly remainder;
};

DivRem divrem(const RatPoly& a, const RatPoly& b);
bool divides(const RatPoly& d, const RatPoly& p);
/// Monic gcd; gcd(0, 0) = 0.
RatPoly gcd(const RatPoly& a, const RatPoly& b);
Rat resultant(const RatPoly& a, const RatPoly& b);

/// Discriminant of a polynomial of degree 2 or 3; UnsupportedDegree otherwise.
Rat poly_discriminant(const RatPoly& p);

/// Monic product of the distinct irreducible factors of p (p nonzero, nonconstant).
RatPoly squarefree_kernel(const RatPoly& p);

/// Monic irreducible factors over Q of a squarefree polynomial, sorted.
std::vector<RatPoly> factor_squarefree(const RatPoly& p);

/// Monic irreducible factors of p together with their multiplicities.
std::vector<std::pair<RatPoly, unsigned>> factor(const RatPoly& p);

/// A place of Q(t): a monic irreducible polynomial, or the place at infinity.
struct Place {
  RatPoly poly;
  bool at_infinity = false;

  static Place infinity() { return Place{RatPoly{}, true}; }
  static Place finite(RatPoly monic_irreducible) { return Place{std::move(monic_irreducible), false}; }
  /// Number of geometric points lying over this place.
  int degree() const { return at_infinity ? 1 : poly.degree(); }
  std::string str(const std::string& var = "t") const;
  friend bool operator==(const Place& a, const Place& b) {
    return a.at_infinity == b.at_infinity && a.poly == b.poly;
  }
  friend bool operator<(const Place& a, const Place& b);
};

/// Largest k with place^k dividing p; p must be nonzero.
unsigned valuation(const RatPoly& p, const RatPoly& place);

/// Valuation at infinity of p viewed as a section of weight `weight`
/// (a polynomial of formal degree `weight`): weight - deg p.
int valuation_at_infinity(const RatPoly& p, int weight);

}  // namespace rankjump
