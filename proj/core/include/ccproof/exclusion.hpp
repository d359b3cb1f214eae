#pragma once

// Proof that no solution lies in the outer box outside the half-width
// position box around a certified solution, for every mass in a mass box.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccproof/equations.hpp"
#include "ccproof/ift.hpp"

namespace ccproof {

struct ComplementRegion {
  Box universe{};
  // The removed box; empty when it misses the universe.
  Box inner{};
  // Closed pieces whose union with inner covers universe.
  std::vector<Box> pieces;
};

// Slab decomposition of universe minus the open box center +- half_width.
// Piece 2d (2d+1) has coordinate d left (right) of the inner box and the
// earlier coordinates restricted to it. Endpoints of the inner box are
// rounded inward, so it stays inside the exact box.
ComplementRegion complement_boxes(const Point& center, Real half_width,
                                  const Box& universe = RegionConstants::outer());

// Coordinate bookkeeping: the pieces plus the inner box cover the universe.
bool covers_universe(const ComplementRegion& region);

enum class ExclusionStatus { Excluded, Failed };
std::string to_string(ExclusionStatus s);

struct ExclusionConfig {
  int max_depth = 60;
  // Boxes examined per attempt before giving up.
  long max_boxes = 200000000;
};

struct ExclusionReport {
  ExclusionStatus status = ExclusionStatus::Failed;
  std::uint64_t boxes_checked = 0;
  std::uint64_t leaves = 0;
  int max_depth_used = 0;
  // Digest of the refuted leaves in visiting order, for re-verification.
  std::string leaf_digest;
  std::optional<Box> witness;
};

// A leaf is refuted when it violates the admissible-region inequalities or
// some residual enclosure over (box, masses) misses zero.
bool refutes_leaf(const Box& box, const MassInterval& masses);

// Depth-first bisection of every piece until each leaf is refuted. Returns
// Failed with the offending box when the depth or box budget runs out.
ExclusionReport exclude(const ComplementRegion& region, const MassInterval& masses, const ExclusionConfig& cfg = {});

struct BallExclusion {
  ExclusionReport report;
  // Mass box half-width that was excluded (or last tried), and the divisor N
  // with half-width = epsilon / N.
  Real mass_half_width = 0;
  Real divisor = 1;
  int retries = 0;
  std::vector<std::string> log;
};

// Tries the mass box of half-width epsilon / N for N in divisors, in order,
// stopping at the first that is excluded. Sets ball.excluded.
BallExclusion exclude_ball(UniquenessBall& ball, const std::vector<Real>& divisors, const ExclusionConfig& cfg = {});

// N in {1, sqrt 3, 3, 6}: the ball itself first, then smaller mass boxes.
std::vector<Real> default_divisors();

}  // namespace ccproof
