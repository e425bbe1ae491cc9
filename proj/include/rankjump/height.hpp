#pragma once

// Canonical heights and regulators, normalized so that
// h^(P) = lim h(x(2^n P)) / 4^n with h(a/b) = log max(|a|, |b|).

#include "rankjump/curve.hpp"

#include <array>
#include <optional>
#include <vector>

namespace rankjump {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HeightData {
  double value = 0;
  double error = 0;
  double local_value = 0;     // sum of local heights
  double doubling_value = 0;  // doubling-limit evaluation
  unsigned digits = 0;        // working precision that succeeded
  std::string method = "local heights, checked by doubling limit";
};

/// Working-precision ladder in decimal digits.
inline constexpr std::array<unsigned, 4> kPrecisionLevels{50, 100, 200, 400};

/// Starting level from RANKJUMP_PRECISION (digits), defaulting to the first level.
unsigned initial_precision();

/// Local-height decomposition at a fixed precision; throws PrecisionError when
/// the two methods disagree by more than `tolerance`.
HeightData canonical_height_at(const EllipticCurveQ& E, const PointQ& P, unsigned digits,
                               double tolerance = 1e-11);

/// Escalates precision through kPrecisionLevels.
HeightData canonical_height(const EllipticCurveQ& E, const PointQ& P);

/// Individual routes, exposed for cross-checking.
double local_height_sum(const EllipticCurveQ& E, const PointQ& P, unsigned digits);
double doubling_limit_height(const EllipticCurveQ& E, const PointQ& P, unsigned digits, unsigned steps = 40);
/// Real period and elliptic logarithm in [0, omega) of the identity-component
/// image, for the integral model (test hooks).
double real_period(const EllipticCurveQ& E);
double elliptic_log(const EllipticCurveQ& E, const PointQ& P);

enum class RegulatorVerdict { Independent, Dependent, Inconclusive };
std::string to_string(RegulatorVerdict v);

struct RegulatorResult {
  double determinant = 0;
  double error = 0;
  RegulatorVerdict verdict = RegulatorVerdict::Inconclusive;
  std::vector<long> relation;  // sum relation[i] P_i is torsion, when dependent
  std::vector<std::vector<double>> gram;
  std::vector<HeightData> heights;  // canonical heights of the inputs
};

inline constexpr double kIndependenceThreshold = 1e-6;

/// Neron-Tate Gram determinant with error propagation; searches relations
/// with coefficients in [-bound, bound] when independence is not certified.
RegulatorResult regulator(const EllipticCurveQ& E, const std::vector<PointQ>& points, long bound = 20);

}  // namespace rankjump
