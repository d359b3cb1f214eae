#pragma once

// Outward-rounded interval arithmetic over the 64-bit-mantissa x87 extended
// format. Every endpoint is computed in round-to-nearest and then moved one
// representable step outward unless an error-free transformation shows the
// rounded value was exact, so degenerate inputs with exact results stay
// degenerate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "ccproof/errors.hpp"

namespace ccproof {

using Real = long double;

namespace rounding {

inline Real next_up(Real v) { return std::nextafter(v, std::numeric_limits<Real>::infinity()); }
inline Real next_down(Real v) { return std::nextafter(v, -std::numeric_limits<Real>::infinity()); }

// a + b = s + e exactly (Knuth).
inline void two_sum(Real a, Real b, Real& s, Real& e) {
  s = a + b;
  const Real bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// Veltkamp split for a 64-bit significand.
inline void split(Real a, Real& hi, Real& lo) {
  constexpr Real kSplitter = 4294967297.0L;  // 2^32 + 1
  const Real c = kSplitter * a;
  hi = c - (c - a);
  lo = a - hi;
}

// a * b = p + e exactly (Dekker) barring over/underflow.
inline void two_prod(Real a, Real b, Real& p, Real& e) {
  p = a * b;
  Real ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
}

// Products this small or this large can make the error term inexact.
inline bool product_is_safe(Real p) {
  const Real m = std::fabs(p);
  return std::isfinite(m) && (m == 0 || (m > 0x1p-16000L && m < 0x1p+16000L));
}

inline Real add_down(Real a, Real b) {
  Real s, e;
  two_sum(a, b, s, e);
  if (!std::isfinite(s)) return s;
  return e < 0 ? next_down(s) : s;
}
inline Real add_up(Real a, Real b) {
  Real s, e;
  two_sum(a, b, s, e);
  if (!std::isfinite(s)) return s;
  return e > 0 ? next_up(s) : s;
}
inline Real sub_down(Real a, Real b) { return add_down(a, -b); }
inline Real sub_up(Real a, Real b) { return add_up(a, -b); }

inline Real mul_down(Real a, Real b) {
  Real p, e;
  two_prod(a, b, p, e);
  if (!product_is_safe(p) || !std::isfinite(e)) return next_down(p);
  return e < 0 ? next_down(p) : p;
}
inline Real mul_up(Real a, Real b) {
  Real p, e;
  two_prod(a, b, p, e);
  if (!product_is_safe(p) || !std::isfinite(e)) return next_up(p);
  return e > 0 ? next_up(p) : p;
}

// Sign of (x / y - fl(x / y)) for y != 0: +1 if the true quotient is above.
inline int quotient_residual_sign(Real x, Real y, Real q) {
  Real p, e;
  two_prod(q, y, p, e);
  if (!product_is_safe(p) || !std::isfinite(e)) return 2;  // unknown
  // x - q*y = (x - p) - e with x - p exact (Sterbenz).
  const Real d = x - p;
  int s = 0;
  if (d > e) s = 1;
  else if (d < e) s = -1;
  return y > 0 ? s : -s;
}

inline Real div_down(Real x, Real y) {
  const Real q = x / y;
  if (!std::isfinite(q)) return q;
  const int s = quotient_residual_sign(x, y, q);
  return (s == 0 || s == 1) ? q : next_down(q);
}
inline Real div_up(Real x, Real y) {
  const Real q = x / y;
  if (!std::isfinite(q)) return q;
  const int s = quotient_residual_sign(x, y, q);
  return (s == 0 || s == -1) ? q : next_up(q);
}

// Sign of (s*s - a).
inline int square_residual_sign(Real a, Real s) {
  Real p, e;
  two_prod(s, s, p, e);
  if (!product_is_safe(p) || !std::isfinite(e)) return 2;
  const Real d = p - a;  // exact
  if (d > -e) return 1;
  if (d < -e) return -1;
  return 0;
}

inline Real sqrt_down(Real a) {
  if (a == 0) return 0;
  const Real s = std::sqrt(a);
  const int sign = square_residual_sign(a, s);
  return (sign == 0 || sign == -1) ? s : next_down(s);
}
inline Real sqrt_up(Real a) {
  if (a == 0) return 0;
  const Real s = std::sqrt(a);
  const int sign = square_residual_sign(a, s);
  return (sign == 0 || sign == 1) ? s : next_up(s);
}

}  // namespace rounding

class Interval {
 public:
  constexpr Interval() = default;
  // Implicit so that exact constants mix into interval expressions.
  constexpr Interval(Real v) : lo_(v), hi_(v) {}  // NOLINT(google-explicit-constructor)
  Interval(Real lo, Real hi);

  static constexpr Interval empty() {
    Interval e;
    e.empty_ = true;
    return e;
  }

  bool is_empty() const { return empty_; }
  Real lo() const { return lo_; }
  Real hi() const { return hi_; }

  bool contains(Real v) const { return !empty_ && lo_ <= v && v <= hi_; }
  bool contains_zero() const { return contains(0); }
  bool is_degenerate() const { return !empty_ && lo_ == hi_; }

  Interval& operator+=(const Interval& b);
  Interval& operator-=(const Interval& b);
  Interval& operator*=(const Interval& b);
  Interval& operator/=(const Interval& b);

  friend bool operator==(const Interval& a, const Interval& b) {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  struct Unchecked {};
  constexpr Interval(Real lo, Real hi, Unchecked) : lo_(lo), hi_(hi) {}
  friend Interval make_unchecked(Real lo, Real hi);

  Real lo_ = 0;
  Real hi_ = 0;
  bool empty_ = false;
};

inline Interval make_unchecked(Real lo, Real hi) { return Interval(lo, hi, Interval::Unchecked{}); }

inline Interval::Interval(Real lo, Real hi) : lo_(lo), hi_(hi) {
  if (!(lo <= hi)) throw std::invalid_argument("interval needs lo <= hi");
}

inline Interval operator-(const Interval& a) {
  if (a.is_empty()) return a;
  return make_unchecked(-a.hi(), -a.lo());
}

inline Interval operator+(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return make_unchecked(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return make_unchecked(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

inline Interval operator*(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const Real al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (al >= 0) {
    if (bl >= 0) return make_unchecked(mul_down(al, bl), mul_up(ah, bh));
    if (bh <= 0) return make_unchecked(mul_down(ah, bl), mul_up(al, bh));
    return make_unchecked(mul_down(ah, bl), mul_up(ah, bh));
  }
  if (ah <= 0) {
    if (bl >= 0) return make_unchecked(mul_down(al, bh), mul_up(ah, bl));
    if (bh <= 0) return make_unchecked(mul_down(ah, bh), mul_up(al, bl));
    return make_unchecked(mul_down(al, bh), mul_up(al, bl));
  }
  if (bl >= 0) return make_unchecked(mul_down(al, bh), mul_up(ah, bh));
  if (bh <= 0) return make_unchecked(mul_down(ah, bl), mul_up(al, bl));
  return make_unchecked(std::min(mul_down(al, bh), mul_down(ah, bl)),
                        std::max(mul_up(al, bl), mul_up(ah, bh)));
}

Interval operator/(const Interval& a, const Interval& b);

inline Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
inline Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
inline Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
inline Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

inline Interval sqr(const Interval& a) {
  using namespace rounding;
  if (a.is_empty()) return a;
  if (a.lo() >= 0) return make_unchecked(mul_down(a.lo(), a.lo()), mul_up(a.hi(), a.hi()));
  if (a.hi() <= 0) return make_unchecked(mul_down(a.hi(), a.hi()), mul_up(a.lo(), a.lo()));
  return make_unchecked(0, std::max(mul_up(a.lo(), a.lo()), mul_up(a.hi(), a.hi())));
}

Interval sqrt(const Interval& a);

// t^(3/2) evaluated as sqrt(t) * t.
Interval pow_3_2(const Interval& a);

// Real overloads so the generated derivative code also runs on points.
inline Real sqr(Real v) { return v * v; }
inline double sqr(double v) { return v * v; }

Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

// Round-to-nearest midpoint, always inside [lo, hi].
Real midpoint(const Interval& a);
// hi - lo rounded up.
Real diameter(const Interval& a);
// Upper bound of hi - lo over two; the half-width.
Real radius(const Interval& a);
// max(|lo|, |hi|).
Real magnitude(const Interval& a);

// a is a subset of b.
bool subset(const Interval& a, const Interval& b);
// a lies in the open interior of b.
bool interior_subset(const Interval& a, const Interval& b);
bool overlaps(const Interval& a, const Interval& b);

// "[lo, hi]" with lo rounded down and hi rounded up to 21 significant
// digits. Each printed endpoint is within half an ulp of the stored one.
std::string to_string(const Interval& a);
// Inverse of to_string: endpoints are read to nearest, which recovers the
// stored values exactly.
Interval parse_interval(std::string_view text);
// Reads "[lo, hi]" or a single decimal as a set of reals, rounding lo down
// and hi up. Use for decimals typed by people.
Interval enclose_interval(std::string_view text);
// A decimal literal enclosed outward.
Interval enclose_decimal(std::string_view text);
// Nearest-rounded decimal value.
Real parse_real(std::string_view text);
std::string format_real(Real v);

// ---- boxes ---------------------------------------------------------------

template <std::size_t N>
using IntervalVector = std::array<Interval, N>;

// (x1, y1, x3, y3).
using Box = IntervalVector<4>;
using Point = std::array<Real, 4>;

template <std::size_t N>
std::array<Real, N> midpoint(const IntervalVector<N>& b) {
  std::array<Real, N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i] = midpoint(b[i]);
  return m;
}

template <std::size_t N>
IntervalVector<N> degenerate(const std::array<Real, N>& p) {
  IntervalVector<N> b;
  for (std::size_t i = 0; i < N; ++i) b[i] = Interval(p[i]);
  return b;
}

template <std::size_t N>
Real max_diameter(const IntervalVector<N>& b) {
  Real d = 0;
  for (const auto& c : b) d = std::max(d, diameter(c));
  return d;
}

template <std::size_t N>
bool contains(const IntervalVector<N>& b, const std::array<Real, N>& p) {
  for (std::size_t i = 0; i < N; ++i)
    if (!b[i].contains(p[i])) return false;
  return true;
}

template <std::size_t N>
bool subset(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  for (std::size_t i = 0; i < N; ++i)
    if (!subset(a[i], b[i])) return false;
  return true;
}

template <std::size_t N>
bool interior_subset(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  for (std::size_t i = 0; i < N; ++i)
    if (!interior_subset(a[i], b[i])) return false;
  return true;
}

template <std::size_t N>
bool is_empty(const IntervalVector<N>& b) {
  for (const auto& c : b)
    if (c.is_empty()) return true;
  return false;
}

template <std::size_t N>
IntervalVector<N> intersect(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  IntervalVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = intersect(a[i], b[i]);
  return r;
}

template <std::size_t N>
IntervalVector<N> hull(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  IntervalVector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = hull(a[i], b[i]);
  return r;
}

// Splits the widest coordinate at its midpoint; ties go to the lowest index.
template <std::size_t N>
std::pair<IntervalVector<N>, IntervalVector<N>> bisect_longest(const IntervalVector<N>& b) {
  std::size_t axis = 0;
  Real widest = -1;
  for (std::size_t i = 0; i < N; ++i) {
    const Real d = diameter(b[i]);
    if (d > widest) {
      widest = d;
      axis = i;
    }
  }
  const Real mid = midpoint(b[axis]);
  auto left = b;
  auto right = b;
  left[axis] = Interval(b[axis].lo(), mid);
  right[axis] = Interval(mid, b[axis].hi());
  return {left, right};
}

template <std::size_t N>
std::string to_string(const IntervalVector<N>& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ", ";
    s += to_string(b[i]);
  }
  return s + ")";
}

}  // namespace ccproof
