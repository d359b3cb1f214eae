#include <doctest.h>

#include <random>

#include "ccproof/exclusion.hpp"

using namespace ccproof;

namespace {

Real distance(const Interval& a, Real v) { return v < a.lo() ? a.lo() - v : v > a.hi() ? v - a.hi() : 0; }

const MassPoint kMixed{0.2L, 0.3L, 0.4L};

const CertifiedSolution& mixed() {
  static const CertifiedSolution sol = [] {
    SearchConfig cfg;
    cfg.grid_n1 = 15;
    return certify_unique(kMixed, cfg);
  }();
  return sol;
}

bool inside(const Box& b, const Point& p) {
  for (int i = 0; i < 4; ++i)
    if (!b[i].contains(p[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("first slab ends half a radius left of the solution") {
  const Point c = midpoint(mixed().enclosure);
  const auto region = complement_boxes(c, 0.083247L / 2);
  REQUIRE(region.pieces.size() == 8);
  // The radius is known to six digits.
  CHECK(std::fabs(region.pieces[0][0].hi() - 0.112229923080813L) < 1e-6L);
  CHECK(region.pieces[0][0].lo() == RegionConstants::outer()[0].lo());
  CHECK(covers_universe(region));
}

TEST_CASE("inner box rounding stays inside the exact box") {
  const Point c{0.1L, 1.3L, 0.7L, -0.2L};
  const Real h = 0.01L;
  const auto region = complement_boxes(c, h);
  for (int d = 0; d < 4; ++d) {
    CHECK(region.inner[d].lo() >= c[d] - h);
    CHECK(region.inner[d].hi() <= c[d] + h);
  }
  CHECK(covers_universe(region));
}

TEST_CASE("inner box swallowing the universe leaves nothing to exclude") {
  const Box u = RegionConstants::outer();
  const auto region = complement_boxes(midpoint(u), 100, u);
  CHECK(region.pieces.empty());
  CHECK(covers_universe(region));
  CHECK(exclude(region, MassInterval::from_point(kMixed)).status == ExclusionStatus::Excluded);
}

TEST_CASE("missing a piece breaks the cover bookkeeping") {
  auto region = complement_boxes(midpoint(mixed().enclosure), 0.02L);
  region.pieces.erase(region.pieces.begin() + 3);
  CHECK_FALSE(covers_universe(region));
  CHECK_THROWS_AS(complement_boxes(Point{}, 0), std::invalid_argument);
}

TEST_CASE("complement of the true ball is excluded") {
  const Point c = midpoint(mixed().enclosure);
  const auto region = complement_boxes(c, 0.02L);
  const auto rep = exclude(region, MassInterval::cube(kMixed, 0.002L));
  CHECK(rep.status == ExclusionStatus::Excluded);
  CHECK(rep.leaves > 0);
  CHECK(rep.leaf_digest.size() == 64);
  // Same input, same leaves.
  CHECK(exclude(region, MassInterval::cube(kMixed, 0.002L)).leaf_digest == rep.leaf_digest);
}

TEST_CASE("a displaced inner box fails with a witness next to the solution") {
  const Point sol = midpoint(mixed().enclosure);
  Point c = sol;
  c[0] += 0.3L;
  ExclusionConfig cfg;
  cfg.max_depth = 40;
  const auto rep = exclude(complement_boxes(c, 0.02L), MassInterval::from_point(kMixed), cfg);
  REQUIRE(rep.status == ExclusionStatus::Failed);
  REQUIRE(rep.witness);
  // Overestimation also blocks boxes touching the solution, so the first
  // stuck leaf need not contain it.
  for (int d = 0; d < 4; ++d) CHECK(distance(rep.witness->at(d), sol[d]) < 1e-2L);
}

TEST_CASE("refuted leaves hold no near-solutions") {
  // Sampled soundness: points with a tiny residual never sit in a refuted box.
  std::mt19937_64 rng(11);
  const Box u = RegionConstants::outer();
  const auto masses = MassInterval::from_point(kMixed);
  const Point sol = midpoint(mixed().enclosure);
  std::uniform_real_distribution<double> w(1e-6, 0.05);
  int refuted = 0;
  for (int t = 0; t < 2000; ++t) {
    Box b;
    std::uniform_real_distribution<double> off(-0.2, 0.2);
    for (int d = 0; d < 4; ++d) {
      const Real half = w(rng);
      const Real lo = std::max(u[d].lo(), sol[d] + Real(off(rng)) - half);
      b[d] = Interval(lo, std::min(u[d].hi(), lo + 2 * half));
    }
    if (refutes_leaf(b, masses)) {
      ++refuted;
      CHECK_FALSE(inside(b, sol));
    }
  }
  CHECK(refuted > 0);
}

TEST_CASE("rigorous ball excludes its complement") {
  UniquenessBall ball = make_ball(mixed(), 0.1L, 0.2L, IftMode::Rigorous);
  const BallExclusion be = exclude_ball(ball, default_divisors());
  CHECK(ball.excluded);
  CHECK(be.report.status == ExclusionStatus::Excluded);
  CHECK(be.divisor == 1);
  CHECK(be.mass_half_width <= ball.epsilon);

  UniquenessBall cube_ball = make_ball(mixed(), 0.1L, 0.2L, IftMode::Rigorous);
  const std::vector<Real> cube{rounding::sqrt_up(3)};
  const BallExclusion bc = exclude_ball(cube_ball, cube);
  CHECK(cube_ball.excluded);
  CHECK(bc.mass_half_width * rounding::sqrt_up(3) <= cube_ball.epsilon);
  CHECK_THROWS_AS(exclude_ball(cube_ball, {}), std::invalid_argument);
  CHECK_THROWS_AS(exclude_ball(cube_ball, {0.5L}), std::invalid_argument);
}
