#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccproof/equations.hpp"
#include "ccproof/interval_matrix.hpp"

namespace ccproof {

enum class KrawczykStatus { UniqueSolution, NoSolution, Undecided, Shrunk };

std::string to_string(KrawczykStatus s);

template <std::size_t N>
struct KrawczykResultN {
  KrawczykStatus status = KrawczykStatus::Undecided;
  IntervalVector<N> image;
  // image ∩ box for Shrunk, empty otherwise.
  IntervalVector<N> refined;
};
using KrawczykResult = KrawczykResultN<4>;

struct SearchConfig {
  int grid_n1 = 20;
  Real tol = 1e-15L;
  int max_depth = 60;
  // Krawczyk steps allowed on one box before it must be refuted, certified
  // or split.
  int max_iterations = 200;
  // Boxes popped from the work stack of one candidate, bisections included.
  long max_boxes = 1000000;
};

struct CertifiedSolution {
  // The box whose Krawczyk image landed in its interior, and that image.
  Box krawczyk_box;
  Box enclosure;
  MassPoint mass;
  // Magnitude bound of F over the enclosure.
  Real midpoint_residual_bound = 0;
  std::size_t survivor_count = 0;
  std::size_t bisection_count = 0;
  std::size_t krawczyk_steps = 0;
  std::size_t refuted_count = 0;
};

// Floating-point inverse of a point matrix. Throws SingularMidpointJacobian
// when the condition estimate exceeds 1e12.
template <std::size_t N>
RealMatrix<N, N> numeric_inverse(const RealMatrix<N, N>& a);

// K = x0 - C F(x0) + (I - C dF(box)) (box - x0) for a system of any size.
template <std::size_t N>
IntervalVector<N> krawczyk_image(const std::array<Real, N>& x0, const IntervalVector<N>& box,
                                 const IntervalVector<N>& f_at_x0, const IntervalMatrix<N, N>& jac_over_box,
                                 const RealMatrix<N, N>& C) {
  const IntervalMatrix<N, N> Ci = to_interval(C);
  const IntervalMatrix<N, N> contraction = identity_interval<N>() - Ci * jac_over_box;
  const IntervalVector<N> x0i = degenerate(x0);
  return x0i - Ci * f_at_x0 + contraction * (box - x0i);
}

template <std::size_t N>
KrawczykResultN<N> classify(const IntervalVector<N>& box, const IntervalVector<N>& image) {
  KrawczykResultN<N> r;
  r.image = image;
  for (auto& c : r.refined) c = Interval::empty();
  if (interior_subset(image, box)) {
    r.status = KrawczykStatus::UniqueSolution;
  } else if (is_empty(intersect(image, box))) {
    r.status = KrawczykStatus::NoSolution;
  } else if (subset(box, image)) {
    r.status = KrawczykStatus::Undecided;
  } else {
    r.status = KrawczykStatus::Shrunk;
    r.refined = intersect(image, box);
  }
  return r;
}

// One Krawczyk step for the 4-body map at fixed masses, centred at the
// midpoint of the box with C the inverse of the point Jacobian there.
KrawczykResult krawczyk_step(const Box& box, const MassPoint& m);

// The image alone, for an explicit centre.
Box krawczyk_image(const Point& x0, const Box& box, const MassPoint& m);

// The N1^4 tiling of the search box. Neighbouring tiles share endpoints
// exactly, so the union is the search box.
std::vector<Box> initial_tiles(int n1);

// Keeps the boxes on which every residual enclosure contains zero. Boxes
// that meet a collision count as excluded.
std::vector<Box> step2_filter(const std::vector<Box>& boxes, const MassPoint& m);

struct BoxSearch {
  struct Found {
    Box krawczyk_box;
    Box enclosure;
  };
  std::vector<Found> found;
  std::size_t bisections = 0;
  std::size_t krawczyk_steps = 0;
  std::size_t refuted = 0;
};

// Step 3 on one candidate box: Krawczyk iteration with refinement and
// bisection until every piece is refuted or certified below cfg.tol.
BoxSearch search_box(const Box& box, const MassPoint& m, const SearchConfig& cfg);

// Finds and certifies the unique convex configuration for fixed masses.
// Throws MultipleCandidates, NoSolutionFound or BudgetExhausted.
CertifiedSolution certify_unique(const MassPoint& m, const SearchConfig& cfg);

// Re-checks a recorded pair: K(krawczyk_box) must lie in the interior of
// krawczyk_box and inside enclosure, and f24, f34 must contain zero on it.
bool verify_enclosure(const Box& krawczyk_box, const Box& enclosure, const MassPoint& m);

}  // namespace ccproof
