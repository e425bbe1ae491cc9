#pragma once

// Genus-0 fibres x = x0 of the conic bundle, their local solvability,
// parametrization, branch loci and quadratic-extension classes.

#include "rankjump/surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rankjump {

/// f(x0) = 0, or the defining quadratic is a constant times a square.
struct DegenerateFibre : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Q(t)(sqrt(s h(t))) with s a squarefree integer and h monic squarefree.
struct QuadExtClass {
  Int s;
  RatPoly h;

  std::string str() const;
  friend bool operator==(const QuadExtClass& a, const QuadExtClass& b) { return a.s == b.s && a.h == b.h; }
  friend bool operator<(const QuadExtClass& a, const QuadExtClass& b);
};

/// Branch places of a double cover of P^1; each finite place counts with its degree.
struct BranchLocus {
  std::vector<Place> places;  // sorted, distinct

  static BranchLocus of(std::vector<Place> places);
  int geometric_count() const;
  std::string str() const;
  friend bool operator==(const BranchLocus&, const BranchLocus&) = default;
};

struct ConicPoint {
  Rat t;
  Rat w;
  friend bool operator==(const ConicPoint&, const ConicPoint&) = default;
};

/// The fibre lhs(t) w^2 = rhs(t) over x = x0.
/// Twist family: lhs = g, rhs = f(x0). KM family: lhs = 1, rhs = q_{x0}.
struct ConicFibre {
  Rat x0;
  RatPoly lhs;
  RatPoly rhs;
  BranchLocus branch;
  QuadExtClass ext_class;

  /// Q = lhs * rhs, so that W = lhs(t) w satisfies W^2 = Q(t).
  RatPoly quadratic() const { return lhs * rhs; }
  bool on_fibre(const ConicPoint& p) const { return lhs(p.t) * p.w * p.w == rhs(p.t); }
  std::string relation_str() const;
};

/// Quadratic-extension class of Q(t)(sqrt(Q)); throws DegenerateFibre when Q is a constant times a square.
QuadExtClass quad_ext_class(const RatPoly& Q);

ConicFibre conic_fibre(const Surface& s, const Rat& x0);

struct Solvability {
  bool solvable = true;
  /// First obstructing place when not solvable: 0 for the real place, else a
  /// prime. Odd primes are listed before 2 since they are cheaper to check.
  std::optional<Int> obstruction;
  std::vector<Int> obstructions;  // every place with Hilbert symbol -1
};

/// Exact local-global decision via Hilbert symbols of the diagonalized form.
Solvability conic_solvability(const ConicFibre& c);
inline bool conic_solvable(const ConicFibre& c) { return conic_solvability(c).solvable; }

/// Nontrivial integer solution of X^2 = a U^2 + b Z^2 (a, b squarefree, nonzero)
/// by Lagrange descent; empty when none exists.
std::optional<std::array<Int, 3>> solve_legendre(const Int& a, const Int& b);

/// Rational parametrization of a solvable fibre by lines through a base point.
class ConicParametrization {
 public:
  /// Throws std::invalid_argument when the fibre has no rational point.
  explicit ConicParametrization(const ConicFibre& c, unsigned naive_bound = 200);

  /// Point for parameter m (nullopt = infinity); empty if the image is not an
  /// affine point of the fibre.
  std::optional<ConicPoint> at(const std::optional<Rat>& m) const;
  /// Parameters of P^1(Q) with height exactly h, in enumeration order.
  static std::vector<std::optional<Rat>> parameters_of_height(unsigned h);

 private:
  ConicFibre fibre_;
  RatPoly Q_;
  std::array<Rat, 3> base_{};  // projective (T : S : W) on W^2 = Q(T, S)
  int free_plane_ = 0;         // coordinate set to zero for the line directions
};

/// All points whose parameter has height <= height_bound, in parameter order.
std::vector<ConicPoint> parametrize(const ConicFibre& c, unsigned height_bound);

bool same_extension(const ConicFibre& a, const ConicFibre& b);

enum class ProductGenus { Reducible, GenusZero, GenusOne };
std::string to_string(ProductGenus g);

/// Curve C1 x_{P^1} C2 of two double covers: classified by common branch points.
ProductGenus fibre_product_genus(const BranchLocus& b1, const BranchLocus& b2);

}  // namespace rankjump
