#pragma once

// Elliptic curves y^2 = x^3 + A x + B over Q and their rational points.

#include "rankjump/surface.hpp"

#include <string>

namespace rankjump {

struct SingularSpecialization : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PointQ {
  bool infinity = true;
  Rat x, y;

  static PointQ identity() { return {}; }
  static PointQ affine(Rat x, Rat y) { return {false, std::move(x), std::move(y)}; }
  bool is_identity() const { return infinity; }
  std::string str() const;
  friend bool operator==(const PointQ& a, const PointQ& b) {
    return a.infinity == b.infinity && (a.infinity || (a.x == b.x && a.y == b.y));
  }
};

class EllipticCurveQ {
 public:
  /// Throws DomainError when 4A^3 + 27B^2 = 0.
  EllipticCurveQ(Rat A, Rat B);

  const Rat& A() const { return A_; }
  const Rat& B() const { return B_; }
  /// -16 (4A^3 + 27B^2)
  Rat discriminant() const;

  /// Integral model y^2 = x^3 + a x + b, a = u^4 A, b = u^6 B, with no prime p
  /// such that p^4 | a and p^6 | b.
  const Int& integral_A() const { return iA_; }
  const Int& integral_B() const { return iB_; }
  const Rat& scale() const { return u_; }
  PointQ to_integral(const PointQ& P) const;

  bool contains(const PointQ& P) const;
  /// Throws std::invalid_argument when P is not on the curve.
  void require(const PointQ& P) const;

  PointQ add(const PointQ& P, const PointQ& Q) const;
  PointQ negate(const PointQ& P) const;
  PointQ scalar_mul(const PointQ& P, long n) const;

  std::string str() const;
  friend bool operator==(const EllipticCurveQ& a, const EllipticCurveQ& b) { return a.A_ == b.A_ && a.B_ == b.B_; }

 private:
  Rat A_, B_;
  Int iA_, iB_;
  Rat u_;
};

struct TorsionVerdict {
  bool torsion = false;
  int order = 0;  // exact order when torsion
};

/// Decides torsion using Mazur's bound: nP = O for some n <= 12.
TorsionVerdict is_torsion(const EllipticCurveQ& E, const PointQ& P);

/// Fibre over t0 of a surface, with the map from the input family's fibre.
struct Specialization {
  Rat t0;
  EllipticCurveQ curve;
  Rat x_scale, x_shift, y_scale;  // X = x_scale x + x_shift, Y = y_scale y

  /// Image of a fibre point (x, y); throws if it does not land on the curve.
  PointQ transport(const Rat& x, const Rat& y) const;
};

/// Throws SingularSpecialization when t0 lies under a singular fibre or the
/// change of variables degenerates there.
Specialization specialize(const Surface& s, const Rat& t0);

}  // namespace rankjump
