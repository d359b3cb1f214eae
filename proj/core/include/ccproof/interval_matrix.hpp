#pragma once

#include <array>
#include <cstddef>

#include "ccproof/interval.hpp"

namespace ccproof {

// Dense row-major matrix over Real or Interval.
template <class T, std::size_t R, std::size_t C>
struct Matrix {
  std::array<T, R * C> e{};

  static constexpr std::size_t rows = R;
  static constexpr std::size_t cols = C;

  T& operator()(std::size_t i, std::size_t j) { return e[i * C + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return e[i * C + j]; }
};

template <std::size_t R, std::size_t C>
using IntervalMatrix = Matrix<Interval, R, C>;
template <std::size_t R, std::size_t C>
using RealMatrix = Matrix<Real, R, C>;

template <std::size_t N>
IntervalMatrix<N, N> identity_interval() {
  IntervalMatrix<N, N> I;
  for (std::size_t i = 0; i < N; ++i) I(i, i) = Interval(1);
  return I;
}

template <std::size_t R, std::size_t C>
IntervalMatrix<R, C> to_interval(const RealMatrix<R, C>& a) {
  IntervalMatrix<R, C> out;
  for (std::size_t k = 0; k < R * C; ++k) out.e[k] = Interval(a.e[k]);
  return out;
}

template <std::size_t R, std::size_t C>
RealMatrix<R, C> midpoint(const IntervalMatrix<R, C>& a) {
  RealMatrix<R, C> out;
  for (std::size_t k = 0; k < R * C; ++k) out.e[k] = midpoint(a.e[k]);
  return out;
}

template <std::size_t R, std::size_t K, std::size_t C>
IntervalMatrix<R, C> operator*(const IntervalMatrix<R, K>& a, const IntervalMatrix<K, C>& b) {
  IntervalMatrix<R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      Interval s(0);
      for (std::size_t k = 0; k < K; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

template <std::size_t R, std::size_t C>
IntervalVector<R> operator*(const IntervalMatrix<R, C>& a, const IntervalVector<C>& v) {
  IntervalVector<R> out;
  for (std::size_t i = 0; i < R; ++i) {
    Interval s(0);
    for (std::size_t k = 0; k < C; ++k) s += a(i, k) * v[k];
    out[i] = s;
  }
  return out;
}

template <std::size_t R, std::size_t C>
IntervalMatrix<R, C> operator-(const IntervalMatrix<R, C>& a, const IntervalMatrix<R, C>& b) {
  IntervalMatrix<R, C> out;
  for (std::size_t k = 0; k < R * C; ++k) out.e[k] = a.e[k] - b.e[k];
  return out;
}

template <std::size_t N>
IntervalVector<N> operator+(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  IntervalVector<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

template <std::size_t N>
IntervalVector<N> operator-(const IntervalVector<N>& a, const IntervalVector<N>& b) {
  IntervalVector<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] - b[i];
  return out;
}

// Upward-rounded sum of squared magnitudes.
template <class Range>
Real sum_of_squares_upper(const Range& entries) {
  Real s = 0;
  for (const Interval& x : entries) {
    const Real m = magnitude(x);
    s = rounding::add_up(s, rounding::mul_up(m, m));
  }
  return s;
}

// Bound on sup ||A||_2 over A in M through the Frobenius norm.
template <std::size_t R, std::size_t C>
Real frobenius_norm_upper(const IntervalMatrix<R, C>& m) {
  return rounding::sqrt_up(sum_of_squares_upper(m.e));
}

// max row sum of magnitudes.
template <std::size_t R, std::size_t C>
Real inf_norm_upper(const IntervalMatrix<R, C>& m) {
  Real best = 0;
  for (std::size_t i = 0; i < R; ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < C; ++j) s = rounding::add_up(s, magnitude(m(i, j)));
    best = std::max(best, s);
  }
  return best;
}

// max column sum of magnitudes.
template <std::size_t R, std::size_t C>
Real one_norm_upper(const IntervalMatrix<R, C>& m) {
  Real best = 0;
  for (std::size_t j = 0; j < C; ++j) {
    Real s = 0;
    for (std::size_t i = 0; i < R; ++i) s = rounding::add_up(s, magnitude(m(i, j)));
    best = std::max(best, s);
  }
  return best;
}

// ||A||_2 <= min(||A||_F, sqrt(||A||_1 ||A||_inf)).
template <std::size_t R, std::size_t C>
Real spectral_norm_upper(const IntervalMatrix<R, C>& m) {
  const Real holder = rounding::sqrt_up(rounding::mul_up(one_norm_upper(m), inf_norm_upper(m)));
  return std::min(frobenius_norm_upper(m), holder);
}

}  // namespace ccproof
