#pragma once

// Quantitative implicit function theorem around a certified solution: the
// norm constants, the radii (r, eps) and the uniqueness ball they define.

#include <cstdint>
#include <string>
#include <string_view>

#include "ccproof/equations.hpp"
#include "ccproof/errors.hpp"
#include "ccproof/interval_matrix.hpp"
#include "ccproof/krawczyk.hpp"

namespace ccproof {

// Rigorous: interval upper bounds over boxes around the enclosure.
// Reference: exact norms at the enclosure midpoint, sups by ball sampling.
enum class IftMode { Rigorous, Reference };

std::string to_string(IftMode mode);
// Accepts "rigorous" or "reference".
IftMode parse_ift_mode(std::string_view text);

struct IftConstants {
  IftMode mode = IftMode::Rigorous;
  Real L_m = 0, M_x = 0, K_xx = 0, K_mm = 0, K_xm = 0;
  Real R1 = 0.1L, R2 = 0.2L;
  Real P = 0, r = 0, epsilon = 0;
};

struct KBounds {
  Real K_xx = 0, K_mm = 0, K_xm = 0;
};

struct ReferenceSampling {
  int samples = 4096;
  std::uint64_t seed = 20240229;
};

// Sub-boxes per side when the rigorous K bounds split the hull of a ball.
inline constexpr int kBallSplits = 6;

// Upper bound on sup ||A||_2 over A in the interval matrix: a floating-point
// singular value of mid(A), confirmed by an interval Cholesky factorization
// of s^2 I - mid^T mid, plus the Frobenius norm of the radius. Falls back to
// spectral_norm_upper when the confirmation fails.
template <std::size_t R, std::size_t C>
Real verified_spectral_norm(const IntervalMatrix<R, C>& a);

// sup ||A^-1|| over A in the interval matrix, from ||I - CA|| < 1.
template <std::size_t N>
Real neumann_inverse_bound(const IntervalMatrix<N, N>& A, const RealMatrix<N, N>& C) {
  const IntervalMatrix<N, N> Ci = to_interval(C);
  const Real q = verified_spectral_norm(identity_interval<N>() - Ci * A);
  if (!(q < 1)) throw NeumannBoundFails(q);
  return rounding::div_up(verified_spectral_norm(Ci), rounding::sub_down(1, q));
}

// Largest singular value of a point matrix.
template <std::size_t R, std::size_t C>
Real spectral_norm(const RealMatrix<R, C>& a);

// sup over unit v, w of ||(v^T T_k w)_k||, the operator norm of a bilinear map.
template <std::size_t R, std::size_t C>
Real bilinear_norm(const std::array<RealMatrix<R, C>, 4>& t);

// x0 is the certified enclosure; the exact centre lies somewhere inside.
Real bound_M_x(const Box& x0, const MassPoint& m0, IftMode mode);
Real bound_L_m(const Box& x0, const MassPoint& m0, IftMode mode);

// K_xx over the x-ball of radius R1 at m0; K_xm over the (x, m) ball of
// radius R2. K_mm is the mass Hessian bound in rigorous mode (zero, since F
// is affine in m) and the sup of ||D_x^2 F|| over the (x, m) ball of radius
// R2 in reference mode, which is how the published constants were obtained.
KBounds bound_K(const Box& x0, const MassPoint& m0, Real R1, Real R2, IftMode mode,
                const ReferenceSampling& sampling = {});

// Fills P, r and epsilon from the constants and R1, R2. Rigorous mode rounds
// every step toward the safe side and re-checks the result in interval
// arithmetic. Throws NonpositiveRadius.
void solve_r_epsilon(IftConstants& c);

// Interval check of P, r and epsilon against the constants.
bool ift_inequality_holds(const IftConstants& c);

IftConstants ift_constants(const Box& enclosure, const MassPoint& m0, Real R1, Real R2, IftMode mode,
                           const ReferenceSampling& sampling = {});

struct UniquenessBall {
  MassPoint center_mass;
  Configuration center_x{};
  Box enclosure{};
  Real r = 0;
  Real epsilon = 0;
  IftConstants constants;
  bool excluded = false;

  // Half-width of the position box around center_x that is guaranteed to lie
  // in B(x0, r) for the unknown exact x0 in the enclosure.
  Real inner_half_width() const;
};

UniquenessBall make_ball(const CertifiedSolution& sol, Real R1, Real R2, IftMode mode,
                         const ReferenceSampling& sampling = {});

}  // namespace ccproof
