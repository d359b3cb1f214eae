#include "ccproof/exclusion.hpp"

#include <cmath>
#include <cstring>

#include "ccproof/digest.hpp"

namespace ccproof {

std::string to_string(ExclusionStatus s) { return s == ExclusionStatus::Excluded ? "Excluded" : "Failed"; }

ComplementRegion complement_boxes(const Point& center, Real half_width, const Box& universe) {
  if (!(half_width > 0)) throw std::invalid_argument("inner half-width must be positive");
  ComplementRegion out;
  out.universe = universe;
  Box inner;
  for (int d = 0; d < 4; ++d) {
    const Real lo = rounding::sub_up(center[d], half_width);
    const Real hi = rounding::sub_down(center[d], -half_width);
    if (!(lo < hi)) throw std::invalid_argument("inner box collapses after rounding");
    inner[d] = Interval(lo, hi);
  }
  out.inner = intersect(inner, universe);
  if (is_empty(out.inner)) {
    for (auto& c : out.inner) c = Interval::empty();
    out.pieces.push_back(universe);
    return out;
  }
  for (int d = 0; d < 4; ++d) {
    Box left = universe, right = universe;
    for (int c = 0; c < d; ++c) left[c] = right[c] = out.inner[c];
    // Pieces of zero width lie in the closed inner box already.
    if (universe[d].lo() < inner[d].lo()) {
      left[d] = Interval(universe[d].lo(), inner[d].lo());
      out.pieces.push_back(left);
    }
    if (inner[d].hi() < universe[d].hi()) {
      right[d] = Interval(inner[d].hi(), universe[d].hi());
      out.pieces.push_back(right);
    }
  }
  return out;
}

bool covers_universe(const ComplementRegion& region) {
  // Walk the slab construction backwards: after handling coordinates d..3 the
  // covered set must be universe restricted to inner in coordinates < d.
  if (is_empty(region.inner)) {
    for (const Box& p : region.pieces)
      if (subset(region.universe, p)) return true;
    return false;
  }
  for (int d = 0; d < 4; ++d) {
    Box slab = region.universe;
    for (int c = 0; c < d; ++c) slab[c] = region.inner[c];
    // Along coordinate d the slab splits into [lo, a], inner, [b, hi].
    Interval covered = region.inner[d];
    for (const Box& p : region.pieces) {
      bool in_slab = true;
      for (int c = 0; c < 4; ++c) {
        if (c == d) continue;
        if (!(p[c] == slab[c])) in_slab = false;
      }
      if (in_slab && overlaps(p[d], covered)) covered = hull(covered, p[d]);
    }
    if (!subset(slab[d], covered)) return false;
  }
  return true;
}

bool refutes_leaf(const Box& box, const MassInterval& masses) {
  const bool m4_below_one = masses.m4.hi() < 1;
  if (outside_admissible(box, m4_below_one)) return true;
  try {
    return residuals_refute(box, masses.as_array());
  } catch (const CollisionBox&) {
    return false;
  }
}

namespace {

// x87 long double carries 10 significant bytes; the padding is not stable.
void hash_box(Sha256& h, const Box& b) {
  unsigned char buf[80];
  for (int i = 0; i < 4; ++i) {
    const Real lo = b[i].lo(), hi = b[i].hi();
    std::memcpy(buf + 20 * i, &lo, 10);
    std::memcpy(buf + 20 * i + 10, &hi, 10);
  }
  h.update(buf, sizeof buf);
}

}  // namespace

ExclusionReport exclude(const ComplementRegion& region, const MassInterval& masses, const ExclusionConfig& cfg) {
  ExclusionReport rep;
  Sha256 digest;
  struct Item {
    Box box;
    int depth;
  };
  std::vector<Item> stack;
  for (auto it = region.pieces.rbegin(); it != region.pieces.rend(); ++it) stack.push_back({*it, 0});
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    ++rep.boxes_checked;
    rep.max_depth_used = std::max(rep.max_depth_used, item.depth);
    if (refutes_leaf(item.box, masses)) {
      ++rep.leaves;
      hash_box(digest, item.box);
      continue;
    }
    if (item.depth >= cfg.max_depth || rep.boxes_checked >= std::uint64_t(cfg.max_boxes)) {
      rep.status = ExclusionStatus::Failed;
      rep.witness = item.box;
      rep.leaf_digest = digest.hex();
      return rep;
    }
    auto [l, r] = bisect_longest(item.box);
    stack.push_back({r, item.depth + 1});
    stack.push_back({l, item.depth + 1});
  }
  rep.status = ExclusionStatus::Excluded;
  rep.leaf_digest = digest.hex();
  return rep;
}

// sqrt 3 rounded up keeps the cube of half-width eps/N inside the ball.
std::vector<Real> default_divisors() { return {1, rounding::sqrt_up(3), 3, 6}; }

BallExclusion exclude_ball(UniquenessBall& ball, const std::vector<Real>& divisors, const ExclusionConfig& cfg) {
  if (divisors.empty()) throw std::invalid_argument("no mass box divisors given");
  BallExclusion out;
  const ComplementRegion region = complement_boxes(ball.center_x, ball.inner_half_width());
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    const Real N = divisors[i];
    if (!(N >= 1)) throw std::invalid_argument("mass box divisor must be at least 1");
    out.divisor = N;
    out.retries = int(i);
    out.mass_half_width = rounding::div_down(ball.epsilon, N);
    out.report = exclude(region, MassInterval::cube(ball.center_mass, out.mass_half_width), cfg);
    out.log.push_back("mass half-width eps/" + format_real(N) + ": " + to_string(out.report.status) + " after " +
                      std::to_string(out.report.boxes_checked) + " boxes");
    if (out.report.status == ExclusionStatus::Excluded) {
      ball.excluded = true;
      return out;
    }
  }
  ball.excluded = false;
  return out;
}

}  // namespace ccproof
