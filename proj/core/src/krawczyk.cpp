#include "ccproof/krawczyk.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ccproof {

std::string to_string(KrawczykStatus s) {
  switch (s) {
    case KrawczykStatus::UniqueSolution: return "UniqueSolution";
    case KrawczykStatus::NoSolution: return "NoSolution";
    case KrawczykStatus::Undecided: return "Undecided";
    case KrawczykStatus::Shrunk: return "Shrunk";
  }
  return "?";
}

template <std::size_t N>
RealMatrix<N, N> numeric_inverse(const RealMatrix<N, N>& a) {
  constexpr int n = static_cast<int>(N);
  using M = Eigen::Matrix<long double, n, n>;
  M A;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = a(i, j);
  if (!A.allFinite()) throw SingularMidpointJacobian("midpoint Jacobian has non-finite entries");
  const Eigen::JacobiSVD<M> svd(A);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > 0) || sv(0) / sv(n - 1) > 1e12L) throw SingularMidpointJacobian();
  M X = A.fullPivLu().inverse();
  X += X * (M::Identity() - A * X);  // one Newton-Schulz correction
  RealMatrix<N, N> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = X(i, j);
  return out;
}

template RealMatrix<1, 1> numeric_inverse<1>(const RealMatrix<1, 1>&);
template RealMatrix<4, 4> numeric_inverse<4>(const RealMatrix<4, 4>&);

namespace {

constexpr Real kStallRatio = 0.9L;

std::array<Interval, 3> as_intervals(const MassPoint& m) { return {Interval(m.m1), Interval(m.m3), Interval(m.m4)}; }

Box inflate(const Box& b, Real w) {
  Box out;
  for (int i = 0; i < 4; ++i) out[i] = b[i] + Interval(-w, w);
  return out;
}

bool step4_holds(const Box& y, const MassPoint& m) {
  try {
    const auto six = residuals_six(y, as_intervals(m));
    return six[4].contains_zero() && six[5].contains_zero();
  } catch (const ProofError&) {
    return false;
  }
}

// Two certified enclosures that overlap hold the same zero when their
// inflated hull again passes the interior test.
bool same_solution(const Box& a, const Box& b, const MassPoint& m) {
  const Box H = inflate(hull(a, b), 1e-12L);
  try {
    return krawczyk_step(H, m).status == KrawczykStatus::UniqueSolution;
  } catch (const ProofError&) {
    return false;
  }
}

}  // namespace

Box krawczyk_image(const Point& x0, const Box& box, const MassPoint& m) {
  const auto mi = as_intervals(m);
  const auto fx0 = F(degenerate(x0), mi);
  const auto J = jac_x(box, mi);
  const auto C = numeric_inverse(jac_x(x0, m.as_array()));
  return krawczyk_image<4>(x0, box, fx0, J, C);
}

KrawczykResult krawczyk_step(const Box& box, const MassPoint& m) {
  return classify(box, krawczyk_image(midpoint(box), box, m));
}

std::vector<Box> initial_tiles(int n1) {
  if (n1 < 1) throw std::invalid_argument("grid_n1 must be at least 1");
  const Box region = RegionConstants::inner();
  std::array<std::vector<Real>, 4> edges;
  for (int c = 0; c < 4; ++c) {
    const Real lo = region[c].lo(), hi = region[c].hi();
    edges[c].resize(n1 + 1);
    for (int k = 0; k <= n1; ++k) edges[c][k] = lo + (hi - lo) * Real(k) / Real(n1);
    edges[c][n1] = hi;
  }
  std::vector<Box> tiles;
  tiles.reserve(std::size_t(n1) * n1 * n1 * n1);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n1; ++c)
        for (int d = 0; d < n1; ++d)
          tiles.push_back({Interval(edges[0][a], edges[0][a + 1]), Interval(edges[1][b], edges[1][b + 1]),
                           Interval(edges[2][c], edges[2][c + 1]), Interval(edges[3][d], edges[3][d + 1])});
  return tiles;
}

std::vector<Box> step2_filter(const std::vector<Box>& boxes, const MassPoint& m) {
  const auto mi = as_intervals(m);
  std::vector<Box> kept;
  for (const Box& b : boxes) {
    try {
      if (!residuals_refute(b, mi)) kept.push_back(b);
    } catch (const CollisionBox&) {
    }
  }
  return kept;
}

BoxSearch search_box(const Box& box, const MassPoint& m, const SearchConfig& cfg) {
  const auto mi = as_intervals(m);
  const Box outer = RegionConstants::outer();
  struct Item {
    Box box;
    int depth;
  };
  BoxSearch out;
  std::vector<Item> stack{{box, 0}};
  long popped = 0;
  while (!stack.empty()) {
    if (++popped > cfg.max_boxes) throw BudgetExhausted("box budget exhausted");
    Item item = stack.back();
    stack.pop_back();
    Box x = item.box;
    bool split = false;
    int steps = 0;
    while (true) {
      if (++steps > cfg.max_iterations) throw BudgetExhausted("Krawczyk iteration budget exhausted");
      try {
        if (residuals_refute(x, mi)) {
          ++out.refuted;
          break;
        }
      } catch (const CollisionBox&) {
        split = true;
        break;
      }
      KrawczykResult r;
      try {
        r = krawczyk_step(x, m);
        ++out.krawczyk_steps;
      } catch (const ProofError&) {
        split = true;
        break;
      }
      if (r.status == KrawczykStatus::UniqueSolution) {
        if (max_diameter(r.image) < cfg.tol) {
          out.found.push_back({x, r.image});
          break;
        }
        x = r.image;
      } else if (r.status == KrawczykStatus::NoSolution) {
        ++out.refuted;
        break;
      } else if (r.status == KrawczykStatus::Undecided) {
        split = true;
        break;
      } else {
        // Every zero in x lies in the image, so the image may replace x
        // when it is smaller. This lets the iteration leave x through a
        // face on which the zero sits.
        const Box next = (subset(r.image, outer) && max_diameter(r.image) < max_diameter(x)) ? r.image : r.refined;
        // A step that leaves the longest side almost intact is slow
        // contraction; splitting is cheaper.
        const bool stalled = max_diameter(next) > kStallRatio * max_diameter(x);
        x = next;
        if (stalled) {
          split = true;
          break;
        }
      }
    }
    if (split) {
      if (item.depth >= cfg.max_depth) throw BudgetExhausted("bisection depth budget exhausted");
      auto [l, rr] = bisect_longest(x);
      ++out.bisections;
      stack.push_back({rr, item.depth + 1});
      stack.push_back({l, item.depth + 1});
    }
  }
  return out;
}

CertifiedSolution certify_unique(const MassPoint& m, const SearchConfig& cfg) {
  m.validate();
  if (!(cfg.tol > 0) || cfg.max_depth < 1 || cfg.max_iterations < 1 || cfg.max_boxes < 1)
    throw std::invalid_argument("search tolerance and budgets must be positive");
  const auto mi = as_intervals(m);
  const Box inner = RegionConstants::inner();

  CertifiedSolution out;
  out.mass = m;
  const auto survivors = step2_filter(initial_tiles(cfg.grid_n1), m);
  out.survivor_count = survivors.size();

  std::vector<BoxSearch::Found> found;
  for (const Box& s : survivors) {
    BoxSearch r = search_box(s, m, cfg);
    out.bisection_count += r.bisections;
    out.krawczyk_steps += r.krawczyk_steps;
    out.refuted_count += r.refuted;
    found.insert(found.end(), r.found.begin(), r.found.end());
  }

  std::vector<BoxSearch::Found> kept;
  for (const auto& f : found) {
    if (is_empty(intersect(f.enclosure, inner)) || !step4_holds(f.enclosure, m)) continue;
    bool duplicate = false;
    for (const auto& k : kept) {
      if (!is_empty(intersect(f.enclosure, k.enclosure)) && same_solution(f.enclosure, k.enclosure, m)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(f);
  }
  if (kept.empty()) throw NoSolutionFound();
  if (kept.size() > 1) throw MultipleCandidates(kept.size());

  out.krawczyk_box = kept.front().krawczyk_box;
  out.enclosure = kept.front().enclosure;
  Real bound = 0;
  for (const auto& v : F(out.enclosure, mi)) bound = std::max(bound, magnitude(v));
  out.midpoint_residual_bound = bound;
  return out;
}

bool verify_enclosure(const Box& krawczyk_box, const Box& enclosure, const MassPoint& m) {
  try {
    const auto r = krawczyk_step(krawczyk_box, m);
    return r.status == KrawczykStatus::UniqueSolution && subset(r.image, enclosure) && step4_holds(enclosure, m);
  } catch (const ProofError&) {
    return false;
  }
}

}  // namespace ccproof
