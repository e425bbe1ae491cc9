#pragma once

// Searches for fibres whose Mordell-Weil rank exceeds the generic rank.

#include "rankjump/conic.hpp"
#include "rankjump/height.hpp"

#include <string>
#include <vector>

namespace rankjump {

struct Budget {
  unsigned x0_height = 10;     // conic fibres x = x0 with height(x0) <= this
  unsigned param_height = 6;   // parameters m on each conic with height(m) <= this
  std::size_t count = 100;     // stop after this many certificates
  unsigned threads = 1;
  unsigned naive_bound = 200;  // base-point search on each conic
  unsigned t0_height = 0;      // when nonzero, skip t0 above this height
};

struct CertifiedPoint {
  Rat x0;            // conic fibre that produced the point
  Rat fibre_x, fibre_y;  // point on the input family's fibre
  PointQ point;      // image on the Weierstrass curve
  TorsionVerdict torsion;
  HeightData height;
};

struct RankJumpCertificate {
  std::string surface_id;
  Rat t0;
  int generic_rank_bound = 0;
  bool generic_rank_exact = false;
  Rat A, B;  // specialized curve y^2 = x^3 + A x + B
  std::vector<CertifiedPoint> points;
  RegulatorResult regulator;
  int claimed_rank_lower_bound = 0;
};

/// Quadratic covers y^2 = h_i(t) of P^1.
struct CoverChallenge {
  std::vector<RatPoly> covers;

  /// Throws std::invalid_argument unless every h_i is squarefree of degree >= 1.
  static CoverChallenge make(std::vector<RatPoly> covers);
  /// True when t0 is not the image of a rational point of any cover.
  bool avoids(const Rat& t0) const;
};

struct JumpResult {
  std::vector<RankJumpCertificate> certificates;
  bool exhausted = false;         // budget ran out before `count` certificates
  std::vector<std::string> log;   // rejected candidates (dependent or inconclusive)
};

/// Stable identifier: FNV-1a 64 of the canonical surface string, in hex.
std::string surface_id(const Surface& s);

/// Generic-rank data for a surface: (bound, exact?).
std::pair<int, bool> generic_rank(const Surface& s);

JumpResult jump1(const Surface& s, const Budget& budget, const CoverChallenge& avoid = {});
JumpResult jump2(const Surface& s, const Budget& budget, const CoverChallenge& avoid = {});
JumpResult avoid_covers(const Surface& s, const CoverChallenge& ch, const Budget& budget, int rank = 1);

struct CensusEntry {
  QuadExtClass ext_class;
  std::vector<Rat> x0s;  // in enumeration order
};

struct Census {
  unsigned height_bound = 0;
  std::vector<CensusEntry> classes;  // sorted by class
  std::size_t fibres = 0;            // solvable non-degenerate fibres
  std::size_t distinct() const { return classes.size(); }
};

/// Extension classes of solvable fibres with height(x0) <= bound.
Census field_census(const Surface& s, unsigned x0_height_bound);

/// Re-verifies a certificate from scratch against the surface.
struct VerificationReport {
  bool ok = true;
  std::vector<std::string> failures;
};
VerificationReport verify_certificate(const Surface& s, const RankJumpCertificate& c);

}  // namespace rankjump
