#include "ccproof/ift.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace ccproof {

std::string to_string(IftMode mode) { return mode == IftMode::Rigorous ? "rigorous" : "reference"; }

IftMode parse_ift_mode(std::string_view text) {
  if (text == "rigorous") return IftMode::Rigorous;
  if (text == "reference") return IftMode::Reference;
  throw std::invalid_argument("mode must be 'rigorous' or 'reference', got '" + std::string(text) + "'");
}

namespace {

template <std::size_t R, std::size_t C>
Eigen::Matrix<long double, int(R), int(C)> to_eigen(const RealMatrix<R, C>& a) {
  Eigen::Matrix<long double, int(R), int(C)> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) out(int(i), int(j)) = a(i, j);
  return out;
}

template <class M>
long double top_singular(const M& m, Eigen::Matrix<long double, M::ColsAtCompileTime, 1>* right = nullptr) {
  Eigen::JacobiSVD<Eigen::Matrix<long double, M::RowsAtCompileTime, M::ColsAtCompileTime>> svd(
      m, right ? Eigen::ComputeFullV : 0);
  if (right) *right = svd.matrixV().col(0);
  return svd.singularValues()(0);
}

Box inflate(const Box& b, Real w) {
  Box out;
  for (int i = 0; i < 4; ++i) out[i] = b[i] + Interval(-w, w);
  return out;
}

std::array<Interval, 3> point_masses(const MassPoint& m) { return MassInterval::from_point(m).as_array(); }

// True when every symmetric matrix in g is positive definite, by interval
// Cholesky.
template <std::size_t N>
bool positive_definite(std::array<Interval, N * N> g) {
  for (std::size_t j = 0; j < N; ++j) {
    Interval d = g[j * N + j];
    for (std::size_t k = 0; k < j; ++k) d -= sqr(g[j * N + k]);
    if (!(d.lo() > 0)) return false;
    const Interval l = sqrt(d);
    g[j * N + j] = l;
    for (std::size_t i = j + 1; i < N; ++i) {
      Interval v = g[i * N + j];
      for (std::size_t k = 0; k < j; ++k) v -= g[i * N + k] * g[j * N + k];
      g[i * N + j] = v / l;
    }
  }
  return true;
}

// Bounds the bilinear norm of an interval tensor two ways: through the
// per-component spectral norms, and through the 4 x (R C) unfolding.
template <std::size_t R, std::size_t C>
Real tensor_norm_upper(const std::array<IntervalMatrix<R, C>, 4>& h) {
  Real s = 0;
  IntervalMatrix<4, R * C> unfolded;
  for (std::size_t k = 0; k < 4; ++k) {
    const Real n = verified_spectral_norm(h[k]);
    s = rounding::add_up(s, rounding::mul_up(n, n));
    for (std::size_t e = 0; e < R * C; ++e) unfolded(k, e) = h[k].e[e];
  }
  return std::min(rounding::sqrt_up(s), verified_spectral_norm(unfolded));
}

// Max of eval over a split of the hull of B(x0, R), for every x0 in the
// centre box; tiles farther than R from the centre box are skipped.
template <class Eval>
Real sup_over_ball_hull(const Box& centre, Real R, const Eval& eval) {
  const Box hull_box = inflate(centre, R);
  constexpr int n = kBallSplits;
  std::array<std::array<Real, n + 1>, 4> edges;
  for (int c = 0; c < 4; ++c) {
    const Real lo = hull_box[c].lo(), hi = hull_box[c].hi();
    for (int k = 0; k <= n; ++k) edges[c][k] = lo + (hi - lo) * Real(k) / Real(n);
    edges[c][n] = hi;
  }
  const Real R2 = rounding::mul_up(R, R);
  Real best = 0;
  std::array<int, 4> idx{};
  for (int t = 0; t < n * n * n * n; ++t) {
    for (int c = 0, rest = t; c < 4; ++c, rest /= n) idx[c] = rest % n;
    Box tile;
    Real gap2 = 0;
    for (int c = 0; c < 4; ++c) {
      tile[c] = Interval(edges[c][idx[c]], edges[c][idx[c] + 1]);
      const Real g = std::max({Real(0), rounding::sub_down(tile[c].lo(), centre[c].hi()),
                               rounding::sub_down(centre[c].lo(), tile[c].hi())});
      gap2 = rounding::add_down(gap2, rounding::mul_down(g, g));
    }
    if (gap2 > R2) continue;
    best = std::max(best, eval(tile));
  }
  return best;
}

using Offset = std::array<Real, 7>;

Real norm(const Offset& d, int dim) {
  Real s = 0;
  for (int i = 0; i < dim; ++i) s += d[i] * d[i];
  return std::sqrt(s);
}

// Maximizes fn over the closed ball |d| <= R in the first dim coordinates:
// dense sampling (half on the sphere, half inside), then a pattern search
// from the best few samples. Deterministic for a given seed.
template <class Fn>
Real sup_over_ball(int dim, Real R, const Fn& fn, const ReferenceSampling& sampling) {
  std::mt19937_64 rng(sampling.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  struct Sample {
    Real value;
    Offset d;
  };
  std::vector<Sample> best;
  auto consider = [&](const Offset& d) {
    const Real v = fn(d);
    best.push_back({v, d});
    std::sort(best.begin(), best.end(), [](const Sample& a, const Sample& b) { return a.value > b.value; });
    if (best.size() > 4) best.pop_back();
  };
  consider(Offset{});
  for (int s = 0; s < sampling.samples; ++s) {
    Offset d{};
    for (int i = 0; i < dim; ++i) d[i] = gauss(rng);
    const Real n = norm(d, dim);
    if (!(n > 0)) continue;
    const Real radius = (s % 2 == 0) ? R : R * std::pow(Real(unit(rng)), Real(1) / dim);
    for (int i = 0; i < dim; ++i) d[i] *= radius / n;
    consider(d);
  }
  Real sup = best.front().value;
  for (Sample start : best) {
    Offset cur = start.d;
    Real val = start.value;
    Real step = R / 8;
    for (int it = 0; it < 1000 && step > R * 1e-7L; ++it) {
      bool improved = false;
      for (int i = 0; i < dim && !improved; ++i)
        for (int sgn : {1, -1}) {
          Offset c = cur;
          c[i] += sgn * step;
          const Real n = norm(c, dim);
          if (n > R)
            for (int k = 0; k < dim; ++k) c[k] *= R / n;
          const Real v = fn(c);
          if (v > val) {
            val = v;
            cur = c;
            improved = true;
            break;
          }
        }
      if (!improved) step /= 2;
    }
    sup = std::max(sup, val);
  }
  return sup;
}

}  // namespace

template <std::size_t R, std::size_t C>
Real spectral_norm(const RealMatrix<R, C>& a) {
  return top_singular(to_eigen(a));
}

template Real spectral_norm<4, 4>(const RealMatrix<4, 4>&);
template Real spectral_norm<4, 3>(const RealMatrix<4, 3>&);

template <std::size_t R, std::size_t C>
Real verified_spectral_norm(const IntervalMatrix<R, C>& a) {
  using namespace rounding;
  const Real fallback = spectral_norm_upper(a);
  RealMatrix<R, C> mid;
  Real rad2 = 0;
  for (std::size_t k = 0; k < R * C; ++k) {
    if (a.e[k].is_empty()) return fallback;
    mid.e[k] = midpoint(a.e[k]);
    const Real d = std::max(sub_up(a.e[k].hi(), mid.e[k]), sub_up(mid.e[k], a.e[k].lo()));
    rad2 = add_up(rad2, mul_up(d, d));
  }
  const Real rad = sqrt_up(rad2);
  const Real sigma = top_singular(to_eigen(mid));
  if (!(sigma > 0)) return std::min(fallback, rad);

  // Gram matrix on the short side.
  constexpr std::size_t n = R <= C ? R : C;
  std::array<Interval, n * n> gram;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Interval v(0);
      if constexpr (R <= C) {
        for (std::size_t k = 0; k < C; ++k) v += Interval(mid(i, k)) * Interval(mid(j, k));
      } else {
        for (std::size_t k = 0; k < R; ++k) v += Interval(mid(k, i)) * Interval(mid(k, j));
      }
      gram[i * n + j] = v;
    }
  for (Real grow : {1e-12L, 1e-8L, 1e-4L}) {
    const Interval s(mul_up(sigma, 1 + grow));
    std::array<Interval, n * n> shifted;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) shifted[i * n + j] = (i == j ? sqr(s) : Interval(0)) - gram[i * n + j];
    if (positive_definite<n>(shifted)) return std::min(fallback, add_up(s.hi(), rad));
  }
  return fallback;
}

template Real verified_spectral_norm<4, 4>(const IntervalMatrix<4, 4>&);
template Real verified_spectral_norm<4, 3>(const IntervalMatrix<4, 3>&);
template Real verified_spectral_norm<4, 16>(const IntervalMatrix<4, 16>&);
template Real verified_spectral_norm<4, 12>(const IntervalMatrix<4, 12>&);

template <std::size_t R, std::size_t C>
Real bilinear_norm(const std::array<RealMatrix<R, C>, 4>& t) {
  // Reference-only quantity, so double precision is plenty.
  using MatRC = Eigen::Matrix<double, int(R), int(C)>;
  using VecC = Eigen::Matrix<double, int(C), 1>;
  using VecR = Eigen::Matrix<double, int(R), 1>;
  std::array<MatRC, 4> T;
  for (int k = 0; k < 4; ++k) T[k] = to_eigen(t[k]).template cast<double>();
  // Alternating maximization: for fixed w the best v is the top eigenvector
  // of sum_k (T_k w)(T_k w)^T, and symmetrically for w.
  auto top = [](const auto& sym, auto& vec) {
    Eigen::SelfAdjointEigenSolver<std::decay_t<decltype(sym)>> es(sym);
    vec = es.eigenvectors().col(sym.rows() - 1);
    return std::sqrt(std::max(0.0, es.eigenvalues()(sym.rows() - 1)));
  };
  double best = 0;
  for (std::size_t start = 0; start <= C; ++start) {
    VecC w = start < C ? VecC(VecC::Unit(int(start))) : VecC(VecC::Ones().normalized());
    VecR v;
    double sigma = 0;
    for (int it = 0; it < 500; ++it) {
      Eigen::Matrix<double, int(R), int(R)> gv = Eigen::Matrix<double, int(R), int(R)>::Zero();
      for (int k = 0; k < 4; ++k) {
        const VecR tw = T[k] * w;
        gv += tw * tw.transpose();
      }
      top(gv, v);
      Eigen::Matrix<double, int(C), int(C)> gw = Eigen::Matrix<double, int(C), int(C)>::Zero();
      for (int k = 0; k < 4; ++k) {
        const VecC tv = T[k].transpose() * v;
        gw += tv * tv.transpose();
      }
      const double next = top(gw, w);
      const bool done = std::fabs(next - sigma) <= 1e-13 * next;
      sigma = next;
      if (done) break;
    }
    best = std::max(best, sigma);
  }
  return best;
}

template Real bilinear_norm<4, 4>(const std::array<RealMatrix<4, 4>, 4>&);
template Real bilinear_norm<4, 3>(const std::array<RealMatrix<4, 3>, 4>&);

Real bound_M_x(const Box& x0, const MassPoint& m0, IftMode mode) {
  if (mode == IftMode::Reference) {
    const auto A = to_eigen(jac_x(midpoint(x0), m0.as_array()));
    Eigen::JacobiSVD<Eigen::Matrix<long double, 4, 4>> svd(A);
    const long double smin = svd.singularValues()(3);
    if (!(smin > 0)) throw SingularMidpointJacobian();
    return 1 / smin;
  }
  const auto A = jac_x(x0, point_masses(m0));
  return neumann_inverse_bound(A, numeric_inverse(midpoint(A)));
}

Real bound_L_m(const Box& x0, const MassPoint& m0, IftMode mode) {
  if (mode == IftMode::Reference) return spectral_norm(jac_m(midpoint(x0), m0.as_array()));
  return verified_spectral_norm(jac_m(x0, point_masses(m0)));
}

KBounds bound_K(const Box& x0, const MassPoint& m0, Real R1, Real R2, IftMode mode,
                const ReferenceSampling& sampling) {
  if (!(R1 > 0) || !(R2 > 0)) throw std::invalid_argument("R1 and R2 must be positive");
  KBounds k;
  if (mode == IftMode::Rigorous) {
    const auto m = point_masses(m0);
    const auto mcube = MassInterval::cube(m0, R2).as_array();
    k.K_xx = sup_over_ball_hull(x0, R1, [&](const Box& b) { return tensor_norm_upper(hess_xx(b, m)); });
    k.K_xm = sup_over_ball_hull(x0, R2, [&](const Box& b) { return tensor_norm_upper(hess_xm(b, mcube)); });
    k.K_mm = 0;
    return k;
  }
  const Point c = midpoint(x0);
  const auto m = m0.as_array();
  auto shifted = [&](const Offset& d) {
    Point x;
    for (int i = 0; i < 4; ++i) x[i] = c[i] + d[i];
    return x;
  };
  k.K_xx = sup_over_ball(
      4, R1, [&](const Offset& d) { return bilinear_norm(hess_xx(shifted(d), m)); }, sampling);
  // D_x D_m F does not depend on m, so the (x, m) ball reduces to its x part.
  k.K_xm = sup_over_ball(
      4, R2, [&](const Offset& d) { return bilinear_norm(hess_xm(shifted(d), m)); }, sampling);
  k.K_mm = sup_over_ball(
      7, R2,
      [&](const Offset& d) {
        const std::array<Real, 3> mm{m[0] + d[4], m[1] + d[5], m[2] + d[6]};
        return bilinear_norm(hess_xx(shifted(d), mm));
      },
      sampling);
  return k;
}

bool ift_inequality_holds(const IftConstants& c) {
  if (!(c.r > 0) || !(c.epsilon > 0) || !(c.P > 0)) return false;
  if (!(c.P <= c.R1) || !(c.r <= c.P) || !(c.r <= c.R2)) return false;
  const Interval Mx(c.M_x), Lm(c.L_m), Kxx(c.K_xx), Kxm(c.K_xm), Kmm(c.K_mm), r(c.r), eps(c.epsilon), R2(c.R2);
  if (!((Interval(2) * Mx * Kxx * Interval(c.P)).hi() <= 1)) return false;
  if (!((sqr(eps) + sqr(r)).hi() <= sqr(R2).lo())) return false;
  if (!((Interval(4) * Mx * Kxm * eps).hi() <= 1)) return false;
  const Interval lhs = Mx * (Lm + Kxm * r + Kmm * eps) * eps;
  return lhs.hi() <= (r / Interval(2)).lo();
}

void solve_r_epsilon(IftConstants& c) {
  using namespace rounding;
  for (Real v : {c.M_x, c.L_m, c.K_xx, c.K_xm, c.K_mm})
    if (!std::isfinite(v) || v < 0) throw std::invalid_argument("IFT constants must be finite and nonnegative");
  if (!(c.M_x > 0) || !(c.R1 > 0) || !(c.R2 > 0)) throw NonpositiveRadius();

  const Real two_mk = mul_up(mul_up(2, c.M_x), c.K_xx);
  c.P = two_mk > 0 ? std::min(div_down(1, two_mk), c.R1) : c.R1;
  c.r = std::min(c.P, c.R2);

  // Positive root of M_x K_mm e^2 + M_x (L_m + K_xm r) e - r/2 = 0, written
  // as r / (b + sqrt(b^2 + 2 a r)) so that K_mm = 0 gives r / (2b).
  const Real a = mul_up(c.M_x, c.K_mm);
  const Real b = mul_up(c.M_x, add_up(c.L_m, mul_up(c.K_xm, c.r)));
  Real eps = div_down(c.r, add_up(b, sqrt_up(add_up(mul_up(b, b), mul_up(mul_up(2, a), c.r)))));
  const Real room = sub_down(mul_down(c.R2, c.R2), mul_up(c.r, c.r));
  eps = std::min(eps, room > 0 ? sqrt_down(room) : Real(0));
  const Real four_mk = mul_up(mul_up(4, c.M_x), c.K_xm);
  if (four_mk > 0) eps = std::min(eps, div_down(1, four_mk));
  c.epsilon = eps;

  for (int attempt = 0; attempt < 16 && c.epsilon > 0 && !ift_inequality_holds(c); ++attempt)
    c.epsilon = mul_down(c.epsilon, 1 - std::ldexp(Real(1), -40 + 2 * attempt));
  if (!(c.r > 0) || !(c.epsilon > 0) || !ift_inequality_holds(c)) throw NonpositiveRadius();
}

IftConstants ift_constants(const Box& enclosure, const MassPoint& m0, Real R1, Real R2, IftMode mode,
                           const ReferenceSampling& sampling) {
  IftConstants c;
  c.mode = mode;
  c.R1 = R1;
  c.R2 = R2;
  c.M_x = bound_M_x(enclosure, m0, mode);
  c.L_m = bound_L_m(enclosure, m0, mode);
  const KBounds k = bound_K(enclosure, m0, R1, R2, mode, sampling);
  c.K_xx = k.K_xx;
  c.K_xm = k.K_xm;
  c.K_mm = k.K_mm;
  solve_r_epsilon(c);
  return c;
}

Real UniquenessBall::inner_half_width() const {
  Real delta = 0;
  for (int i = 0; i < 4; ++i) {
    delta = std::max(delta, rounding::sub_up(enclosure[i].hi(), center_x[i]));
    delta = std::max(delta, rounding::sub_up(center_x[i], enclosure[i].lo()));
  }
  return rounding::sub_down(r / 2, delta);
}

UniquenessBall make_ball(const CertifiedSolution& sol, Real R1, Real R2, IftMode mode,
                         const ReferenceSampling& sampling) {
  UniquenessBall b;
  b.center_mass = sol.mass;
  b.enclosure = sol.enclosure;
  b.center_x = midpoint(sol.enclosure);
  b.constants = ift_constants(sol.enclosure, sol.mass, R1, R2, mode, sampling);
  b.r = b.constants.r;
  b.epsilon = b.constants.epsilon;
  return b;
}

}  // namespace ccproof
