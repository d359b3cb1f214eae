#pragma once

// Residuals of the planar 4-body convex central configuration problem with
// q1 = (x1, y1), q2 = (-1, 0), q3 = (x3, y3), q4 = (1, 0) and m2 = 1.
// All evaluators are templates over Real (point evaluation) and Interval.

#include <array>
#include <cmath>
#include <string>

#include "ccproof/interval.hpp"
#include "ccproof/interval_matrix.hpp"

namespace ccproof {

struct MassPoint {
  Real m1 = 1, m3 = 1, m4 = 1;

  // Throws std::invalid_argument unless every mass lies in (0, 1].
  void validate() const;
  std::array<Real, 3> as_array() const { return {m1, m3, m4}; }
  friend bool operator==(const MassPoint&, const MassPoint&) = default;
};

struct MassInterval {
  Interval m1{1}, m3{1}, m4{1};

  static MassInterval from_point(const MassPoint& m) { return {Interval(m.m1), Interval(m.m3), Interval(m.m4)}; }
  // The cube [m - h, m + h] in each coordinate, endpoints rounded outward.
  static MassInterval cube(const MassPoint& m, Real half_width);
  std::array<Interval, 3> as_array() const { return {m1, m3, m4}; }
};

using Configuration = Point;

// Interval hulls of the admissible region: the search box and the box that
// contains every admissible configuration.
struct RegionConstants {
  static Box inner();
  static Box outer();
};

template <class T>
struct DistanceKernel {
  // Pair order (1,2), (1,3), (1,4), (2,3), (3,4). R24 = 1/8 is constant.
  std::array<T, 5> s;   // squared distances
  std::array<T, 5> r;   // s^(-3/2)
  std::array<T, 5> r5;  // r / s
  std::array<T, 5> r7;  // r5 / s
};

namespace detail {

using std::sqrt;

// Squared-distance lower bound below which a box is treated as a collision.
inline constexpr Real kCollisionThreshold = 1e-12L;

template <class T>
std::array<T, 5> squared_distances(const std::array<T, 4>& x) {
  const T& x1 = x[0];
  const T& y1 = x[1];
  const T& x3 = x[2];
  const T& y3 = x[3];
  return {sqr(x1 + T(1)) + sqr(y1), sqr(x1 - x3) + sqr(y1 - y3), sqr(x1 - T(1)) + sqr(y1),
          sqr(x3 + T(1)) + sqr(y3), sqr(x3 - T(1)) + sqr(y3)};
}

inline Real lower(Real v) { return v; }
inline Real lower(const Interval& v) { return v.lo(); }

inline Real inv_pow_3_2(Real s) { return 1 / (s * std::sqrt(s)); }
inline Interval inv_pow_3_2(const Interval& s) { return Interval(1) / pow_3_2(s); }

template <class T>
T inverse_cube_distance(const T& s) {
  if (!(lower(s) >= kCollisionThreshold)) throw CollisionBox();
  return inv_pow_3_2(s);
}

template <class T>
DistanceKernel<T> make_kernel(const std::array<T, 4>& x, bool with_higher) {
  DistanceKernel<T> k;
  k.s = squared_distances(x);
  for (int p = 0; p < 5; ++p) {
    k.r[p] = inverse_cube_distance(k.s[p]);
    if (with_higher) {
      k.r5[p] = k.r[p] / k.s[p];
      k.r7[p] = k.r5[p] / k.s[p];
    } else {
      k.r5[p] = T(0);
      k.r7[p] = T(0);
    }
  }
  return k;
}

#include "ccproof/detail/cc_derivatives.inc"

}  // namespace detail

inline const char* derivatives_digest() { return detail::kGeneratedDerivativesDigest; }

template <class T>
std::array<T, 4> delta_areas(const std::array<T, 4>& x) {
  const T& x1 = x[0];
  const T& y1 = x[1];
  const T& x3 = x[2];
  const T& y3 = x[3];
  return {(x3 + T(1)) * y1 - y3 * (x1 + T(1)), T(2) * y1, (T(1) - x3) * y1 + y3 * (x1 - T(1)), T(-2) * y3};
}

// (f12, f13, f14, f23, f24, f34) written as displayed. m2 is normally 1;
// it is a parameter only so homogeneity in the full mass vector is testable.
template <class T>
std::array<T, 6> residuals_six(const std::array<T, 4>& x, const std::array<T, 3>& m, const T& m2 = T(1)) {
  const auto k = detail::make_kernel(x, false);
  const T& y1 = x[1];
  const T& y3 = x[3];
  const T& m1 = m[0];
  const T& m3 = m[1];
  const T& m4 = m[2];
  const T& R12 = k.r[0];
  const T& R13 = k.r[1];
  const T& R14 = k.r[2];
  const T& R23 = k.r[3];
  const T& R34 = k.r[4];
  const T eighth(0.125L);
  const auto d = delta_areas(x);
  const T& D123 = d[0];
  const T& D134 = d[2];
  std::array<T, 6> f;
  f[0] = m3 * (R13 - R23) * D123 + T(2) * m4 * (R14 - eighth) * y1;
  f[1] = m2 * (R12 - R23) * (-D123) + m4 * (R14 - R34) * D134;
  f[2] = T(-2) * m2 * (R12 - eighth) * y1 + m3 * (R13 - R34) * (-D134);
  f[3] = m1 * (R12 - R13) * D123 - T(2) * m4 * (eighth - R34) * y3;
  f[4] = T(2) * m1 * (R12 - R14) * y1 + T(2) * m3 * (R23 - R34) * y3;
  f[5] = m1 * (R13 - R14) * D134 - T(2) * m2 * (R23 - eighth) * y3;
  return f;
}

// The square system (f12, f13, f14, f23).
template <class T>
std::array<T, 4> F(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  const auto k = detail::make_kernel(x, false);
  std::array<T, 4> f;
  detail::generated_values(x, m, k, f);
  return f;
}

template <class T>
struct FirstOrder {
  Matrix<T, 4, 4> jx;  // dF_i / dx_a
  Matrix<T, 4, 3> jm;  // dF_i / dm_c
};

template <class T>
FirstOrder<T> first_order(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  const auto k = detail::make_kernel(x, true);
  FirstOrder<T> out;
  detail::generated_first_order(x, m, k, out.jx.e, out.jm.e);
  return out;
}

template <class T>
Matrix<T, 4, 4> jac_x(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  return first_order(x, m).jx;
}

template <class T>
Matrix<T, 4, 3> jac_m(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  return first_order(x, m).jm;
}

template <class T>
struct SecondOrder {
  std::array<Matrix<T, 4, 4>, 4> hxx;  // per component, d2F_i / dx_a dx_b
  std::array<Matrix<T, 4, 3>, 4> hxm;  // per component, d2F_i / dx_a dm_c
};

template <class T>
SecondOrder<T> second_order(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  const auto k = detail::make_kernel(x, true);
  std::array<std::array<T, 16>, 4> hxx{};
  std::array<std::array<T, 12>, 4> hxm{};
  detail::generated_second_order(x, m, k, hxx, hxm);
  SecondOrder<T> out;
  for (int c = 0; c < 4; ++c) {
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        out.hxx[c](a, b) = hxx[c][4 * a + b];
        out.hxx[c](b, a) = hxx[c][4 * a + b];
      }
    out.hxm[c].e = hxm[c];
  }
  return out;
}

template <class T>
std::array<Matrix<T, 4, 4>, 4> hess_xx(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  return second_order(x, m).hxx;
}

template <class T>
std::array<Matrix<T, 4, 3>, 4> hess_xm(const std::array<T, 4>& x, const std::array<T, 3>& m) {
  return second_order(x, m).hxm;
}

// F is affine in m, so the mass Hessian vanishes identically.
template <class T>
std::array<Matrix<T, 3, 3>, 4> hess_mm(const std::array<T, 4>&, const std::array<T, 3>&) {
  return {};
}

// True when some residual enclosure misses zero. Residuals are tried one at a
// time, cheapest first. Throws CollisionBox like every other evaluator.
bool residuals_refute(const Box& box, const std::array<Interval, 3>& m);

// True when every point of the box violates one of the admissible-region
// inequalities. m4_below_one means m4 < 1 for every mass in play, which
// forces x1 > 0 and x3 > 0.
bool outside_admissible(const Box& box, bool m4_below_one);

// Floating-point membership test for the admissible region.
bool admissible(const Configuration& x, bool m4_below_one);

}  // namespace ccproof
