#pragma once

// Rational elliptic surfaces over Q(t): input families, Weierstrass models,
// Kodaira fibre classification and the Shioda-Tate rank bound.

#include "rankjump/poly.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rankjump {

/// The input does not describe a rational elliptic surface in scope.
struct NotRationalElliptic : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A Weierstrass model whose local data matches no Kodaira type.
struct InvalidModel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The surface g(t) y^2 = f(x) with f a separable cubic and g separable of degree 1 or 2.
struct TwistFamily {
  RatPoly f;  // in x
  RatPoly g;  // in t

  static TwistFamily make(RatPoly f, RatPoly g);
};

/// y^2 = a3(t) x^3 + a2(t) x^2 + a1(t) x + a0(t) with deg a_i <= 2.
struct KMFamily {
  std::array<RatPoly, 4> a;  // a[i] multiplies x^i

  static KMFamily make(std::array<RatPoly, 4> a);
  /// The quadratic in t obtained by fixing x = x0.
  RatPoly q_at(const Rat& x0) const;
};

/// y^2 = x^3 + A(t) x + B(t) with deg A <= 4, deg B <= 6 and nonzero discriminant.
struct WeierstrassQt {
  RatPoly A;
  RatPoly B;

  static WeierstrassQt make(RatPoly A, RatPoly B);
  /// -16 (4 A^3 + 27 B^2)
  RatPoly discriminant() const;
  friend bool operator==(const WeierstrassQt&, const WeierstrassQt&) = default;
};

using SurfaceDefinition = std::variant<TwistFamily, KMFamily, WeierstrassQt>;

/// Change of coordinates from the input family to its Weierstrass model:
/// X = (x_scale x + x_shift) / divisor^2, Y = y_scale y / divisor^3.
struct WeierstrassTransport {
  RatPoly x_scale = RatPoly::constant(1);
  RatPoly x_shift;
  RatPoly y_scale = RatPoly::constant(1);
  RatPoly divisor = RatPoly::constant(1);
};

struct WeierstrassForm {
  WeierstrassQt model;
  WeierstrassTransport transport;
};

/// Converts to a short Weierstrass model, minimal at every finite place.
/// Throws NotRationalElliptic when the minimal model breaks the degree bounds
/// or the family is constant.
WeierstrassForm to_weierstrass(const SurfaceDefinition& s);

enum class KodairaKind { I0, In, II, III, IV, InStar, IVStar, IIIStar, IIStar };

struct KodairaType {
  KodairaKind kind = KodairaKind::I0;
  int n = 0;  // index for I_n and I_n*

  int components() const;
  int euler_number() const;
  bool reduced() const;
  std::string str() const;
  friend bool operator==(const KodairaType&, const KodairaType&) = default;
};

/// Kodaira type from the local valuations of A, B and the discriminant of a
/// model minimal at that place (residue characteristic 0). A valuation of -1
/// stands for a vanishing coefficient.
KodairaType kodaira_from_valuations(int vA, int vB, int vDelta);

struct FibreEntry {
  Place place;
  KodairaType type;
  int vA;  // -1 when A = 0
  int vB;  // -1 when B = 0
  int vDelta;
};

struct FibreClassification {
  std::vector<FibreEntry> fibres;  // singular fibres only

  /// Sum over geometric fibres of the local Euler numbers.
  int euler_number() const;
  int non_reduced_count() const;
  /// Geometric configuration such as "2I0*" or "II + II*".
  std::string configuration() const;
};

FibreClassification classify_fibres(const WeierstrassQt& w);

/// Recovers (f, g) with f = x^3 + a x + b and g monic when A = a g^2, B = b g^3
/// and the discriminant is c g^6.
std::optional<TwistFamily> is_twist_case(const WeierstrassQt& w);

/// Chatelet model w^2 - a y'^2 = f~(x) of a twist family with deg g = 2.
struct ChateletModel {
  Int a;           // squarefree
  RatPoly f;       // f~ = f / lead(g)
  Rat t_shift;     // s = t + t_shift puts g in the form lead(g) (s^2 - a m^2)
  Rat y_scale;     // m: y' = m y

  struct Point {
    Rat x, y, w;
  };
  struct TwistPoint {
    Rat t, x, y;
  };
  Point forward(const TwistPoint& p) const;
  /// Requires y != 0.
  TwistPoint backward(const Point& p) const;
  bool on_model(const Point& p) const;
  std::string str() const;
};

ChateletModel to_chatelet(const TwistFamily& s);

/// 8 - sum over geometric fibres of (m_v - 1).
int shioda_tate_bound(const FibreClassification& c);

/// An input family bundled with its Weierstrass form and fibre data.
struct Surface {
  std::string label;
  SurfaceDefinition definition;
  WeierstrassForm weierstrass;
  FibreClassification fibres;

  static Surface make(SurfaceDefinition def, std::string label = {});
  bool is_twist() const { return std::holds_alternative<TwistFamily>(definition); }
  bool is_km() const { return std::holds_alternative<KMFamily>(definition); }
  /// Fibre equation residual: zero iff (x, y) lies on the fibre over t0.
  Rat fibre_residual(const Rat& t0, const Rat& x, const Rat& y) const;
  /// Canonical text used for hashing and serialization.
  std::string canonical_string() const;
};

}  // namespace rankjump
