#include "ccproof/equations.hpp"

#include <stdexcept>

namespace ccproof {

void MassPoint::validate() const {
  for (Real v : {m1, m3, m4})
    if (!(v > 0 && v <= 1)) throw std::invalid_argument("masses must lie in (0, 1]");
}

MassInterval MassInterval::cube(const MassPoint& m, Real half_width) {
  const Interval h(-half_width, half_width);
  return {Interval(m.m1) + h, Interval(m.m3) + h, Interval(m.m4) + h};
}

Box RegionConstants::inner() {
  return {hull(enclose_decimal("0"), enclose_decimal("1")), hull(enclose_decimal("0.267"), enclose_decimal("1.733")),
          hull(enclose_decimal("0"), enclose_decimal("1")), hull(enclose_decimal("-1.733"), enclose_decimal("-0.267"))};
}

Box RegionConstants::outer() {
  return {Interval(-1, 1), hull(Interval(0), enclose_decimal("1.733")), Interval(-1, 1),
          hull(enclose_decimal("-1.733"), Interval(0))};
}

bool residuals_refute(const Box& x, const std::array<Interval, 3>& m) {
  const auto k = detail::make_kernel(x, false);
  const Interval& y1 = x[1];
  const Interval& y3 = x[3];
  const Interval& m1 = m[0];
  const Interval& m3 = m[1];
  const Interval& m4 = m[2];
  const Interval& R12 = k.r[0];
  const Interval& R13 = k.r[1];
  const Interval& R14 = k.r[2];
  const Interval& R23 = k.r[3];
  const Interval& R34 = k.r[4];
  const Interval eighth(0.125L);

  // f24 and the y-only terms need no signed areas.
  if (!(Interval(2) * m1 * (R12 - R14) * y1 + Interval(2) * m3 * (R23 - R34) * y3).contains_zero()) return true;

  const auto d = delta_areas(x);
  const Interval& D123 = d[0];
  const Interval& D134 = d[2];
  if (!(m3 * (R13 - R23) * D123 + Interval(2) * m4 * (R14 - eighth) * y1).contains_zero()) return true;
  if (!((R12 - R23) * (-D123) + m4 * (R14 - R34) * D134).contains_zero()) return true;
  if (!(Interval(-2) * (R12 - eighth) * y1 + m3 * (R13 - R34) * (-D134)).contains_zero()) return true;
  if (!(m1 * (R12 - R13) * D123 - Interval(2) * m4 * (eighth - R34) * y3).contains_zero()) return true;
  if (!(m1 * (R13 - R14) * D134 - Interval(2) * (R23 - eighth) * y3).contains_zero()) return true;
  return false;
}

bool outside_admissible(const Box& b, bool m4_below_one) {
  const Interval& x1 = b[0];
  const Interval& y1 = b[1];
  const Interval& x3 = b[2];
  const Interval& y3 = b[3];
  if (x1.lo() >= 1 || x1.hi() <= -1 || x3.lo() >= 1 || x3.hi() <= -1) return true;
  if ((x1.hi() < 0 && x3.lo() > 0) || (x1.lo() > 0 && x3.hi() < 0)) return true;

  const Interval root3 = sqrt(Interval(3));
  const Interval gap = Interval(2) - root3;  // 2 (1 - sqrt(3)/2)
  if (y1.hi() <= gap.lo() || y1.lo() >= root3.hi()) return true;
  if (y3.lo() >= -gap.lo() || y3.hi() <= -root3.hi()) return true;

  if ((sqr(x1 + Interval(1)) + sqr(y1)).lo() >= 4) return true;
  if ((sqr(x1 - Interval(1)) + sqr(y1)).lo() >= 4) return true;
  if ((sqr(x3 + Interval(1)) + sqr(y3)).lo() >= 4) return true;
  if ((sqr(x3 - Interval(1)) + sqr(y3)).lo() >= 4) return true;

  if (m4_below_one && (x1.hi() <= 0 || x3.hi() <= 0)) return true;
  return false;
}

bool admissible(const Configuration& q, bool m4_below_one) {
  const Real x1 = q[0], y1 = q[1], x3 = q[2], y3 = q[3];
  const Real root3 = std::sqrt(3.0L);
  const Real gap = 2 - root3;
  if (!(x1 > -1 && x1 < 1 && x3 > -1 && x3 < 1 && x1 * x3 >= 0)) return false;
  if (!(y1 > gap && y1 < root3 && y3 > -root3 && y3 < -gap)) return false;
  if (!((x1 + 1) * (x1 + 1) + y1 * y1 < 4 && (x1 - 1) * (x1 - 1) + y1 * y1 < 4)) return false;
  if (!((x3 + 1) * (x3 + 1) + y3 * y3 < 4 && (x3 - 1) * (x3 - 1) + y3 * y3 < 4)) return false;
  if (m4_below_one && !(x1 > 0 && x3 > 0)) return false;
  return true;
}

}  // namespace ccproof
