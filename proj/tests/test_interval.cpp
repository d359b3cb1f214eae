#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include "ccproof/interval.hpp"
#include "ccproof/interval_matrix.hpp"
#include "oracle.hpp"

using namespace ccproof;
using oracle::Big;
using oracle::big;

namespace {

Interval random_interval(std::mt19937_64& rng, Real scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Real a = scale * Real(u(rng));
  Real b = a + scale * Real(std::fabs(u(rng))) * (u(rng) > 0.8 ? 0 : 1);
  return Interval(a, b);
}

Real sample(std::mt19937_64& rng, const Interval& iv) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = u(rng);
  if (t < 0.05) return iv.lo();
  if (t > 0.95) return iv.hi();
  Real v = iv.lo() + (iv.hi() - iv.lo()) * Real(t);
  return std::clamp(v, iv.lo(), iv.hi());
}

Interval random_subinterval(std::mt19937_64& rng, const Interval& iv) {
  Real a = sample(rng, iv), b = sample(rng, iv);
  if (a > b) std::swap(a, b);
  return Interval(a, b);
}

}  // namespace

TEST_CASE("addition encloses the exact sum") {
  CHECK(subset(Interval(4, 6), Interval(1, 2) + Interval(3, 4)));
  const Real a = 0.1L;
  CHECK(Interval(a) + Interval(0) == Interval(a));
  // 0.1 + 0.2 is inexact in binary, so the result must straddle it.
  const Interval s = Interval(0.1L) + Interval(0.2L);
  CHECK(oracle::encloses(s, big(0.1L) + big(0.2L)));
  CHECK(s.lo() < s.hi());
}

TEST_CASE("multiplication rule") {
  CHECK(subset(Interval(1, 16), Interval(1, 4) * Interval(1, 4)));
  CHECK(Interval(0) * Interval(-5, 7) == Interval(0));
  CHECK(Interval(-2, 3) * Interval(-5, 7) == Interval(-15, 21));
}

TEST_CASE("division rule") {
  const Interval q = Interval(2, 32) / Interval(10, 25);
  CHECK(oracle::encloses(q, Big(2) / 25));
  CHECK(oracle::encloses(q, Big(32) / 10));
  const Real a = 0.7L;
  CHECK(Interval(a) / Interval(1) == Interval(a));
  CHECK_THROWS_AS(Interval(1) / Interval(0, 1), DivisionByZeroInterval);
  CHECK_THROWS_AS(Interval(1) / Interval(-1, 1), DivisionByZeroInterval);
}

TEST_CASE("sqrt and pow_3_2") {
  CHECK(sqrt(Interval(4, 9)) == Interval(2, 3));
  CHECK(pow_3_2(Interval(1)) == Interval(1));
  const Interval p = pow_3_2(Interval(2));
  const Big exact = boost::multiprecision::sqrt(Big(8));
  CHECK(oracle::encloses(p, exact));
  CHECK(diameter(p) < 1e-17L);
  CHECK_THROWS_AS(sqrt(Interval(-1e-30L, 1)), NegativeDomain);
}

TEST_CASE("lattice helpers") {
  CHECK(intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2));
  CHECK(intersect(Interval(0, 1), Interval(2, 3)).is_empty());
  CHECK(diameter(Interval(-1, 2)) == 3);
  CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
  CHECK(hull(Interval::empty(), Interval(2, 3)) == Interval(2, 3));
  CHECK(magnitude(Interval(-5, 3)) == 5);
  CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
  const Interval w(0.1L, 0.3L);
  CHECK(w.contains(midpoint(w)));
}

TEST_CASE("bisect_longest splits the widest side, lowest index on ties") {
  {
    Box b{Interval(0, 2), Interval(0, 1), Interval(0, 1), Interval(0, 1)};
    auto [l, r] = bisect_longest(b);
    CHECK(l[0] == Interval(0, 1));
    CHECK(r[0] == Interval(1, 2));
    CHECK(l[1] == b[1]);
  }
  {
    Box b{Interval(0, 1), Interval(0, 1), Interval(0, 1), Interval(0, 1)};
    auto [l, r] = bisect_longest(b);
    CHECK(l[0] == Interval(0, 0.5L));
    CHECK(r[0] == Interval(0.5L, 1));
  }
  {
    Box b{Interval(0, 1), Interval(0, 1), Interval(0, 1), Interval(0, 4)};
    auto [l, r] = bisect_longest(b);
    CHECK(l[3] == Interval(0, 2));
    CHECK(r[3] == Interval(2, 4));
    CHECK(l[0] == b[0]);
  }
}

TEST_CASE("expression form changes the enclosure") {
  const Interval x(1, 4);
  const Interval naive = Interval(2) * sqr(x) / (sqr(x) + Interval(9)) - Interval(1);
  CHECK(subset(Interval(-0.92L, 2.2L), naive));
  const Interval rewritten = Interval(2) / (Interval(1) + Interval(9) / sqr(x)) - Interval(1);
  const Real delta = 1e-10L;
  CHECK(subset(rewritten, Interval(-0.8L - delta, 0.28L + delta)));
  CHECK(oracle::encloses(rewritten, Big(-8) / 10));
  CHECK(oracle::encloses(rewritten, Big(28) / 100));
}

TEST_CASE("serialization round-trips endpoints exactly") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Interval iv = random_interval(rng, std::pow(10.0L, Real(int(rng() % 40) - 20)));
    const std::string s = to_string(iv);
    CHECK(parse_interval(s) == iv);
  }
  for (int i = 0; i < 200; ++i) {
    // The printed decimals bracket the stored endpoints.
    const Interval iv = random_interval(rng, 1);
    CHECK(subset(iv, enclose_interval(to_string(iv))));
  }
  const Interval tenth = enclose_interval("[0.1, 0.1]");
  CHECK(oracle::encloses(tenth, Big(1) / 10));
  CHECK(tenth.lo() < tenth.hi());
  CHECK(rounding::next_up(tenth.lo()) == tenth.hi());
  CHECK(enclose_interval("0.25") == Interval(0.25L));
  CHECK(to_string(Interval(1)) == "[1.00000000000000000000e+00, 1.00000000000000000000e+00]");
  CHECK_THROWS_AS(parse_interval("[2, 1]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_interval("[x, 1]"), std::invalid_argument);
}

TEST_CASE("operator-norm bounds") {
  CHECK(frobenius_norm_upper(identity_interval<4>()) == 2);
  CHECK(frobenius_norm_upper(IntervalMatrix<4, 4>{}) == 0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    IntervalMatrix<4, 4> M;
    Eigen::Matrix4d A;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        A(i, j) = n(rng);
        M(i, j) = Interval(Real(A(i, j)));
      }
    const double spectral = Eigen::JacobiSVD<Eigen::Matrix4d>(A).singularValues()(0);
    CHECK(frobenius_norm_upper(M) >= Real(spectral) * (1 - 1e-15L));
    CHECK(spectral_norm_upper(M) >= Real(spectral) * (1 - 1e-15L));
  }
}

TEST_CASE("containment and monotonicity fuzzing") {
  std::mt19937_64 rng(20240531);
  using Op = std::function<Interval(const Interval&, const Interval&)>;
  using BigOp = std::function<Big(const Big&, const Big&)>;
  struct Case {
    const char* name;
    Op op;
    BigOp exact;
    bool needs_nonzero_divisor;
  };
  const Case cases[] = {
      {"add", [](auto& a, auto& b) { return a + b; }, [](auto& a, auto& b) { return a + b; }, false},
      {"sub", [](auto& a, auto& b) { return a - b; }, [](auto& a, auto& b) { return a - b; }, false},
      {"mul", [](auto& a, auto& b) { return a * b; }, [](auto& a, auto& b) { return a * b; }, false},
      {"div", [](auto& a, auto& b) { return a / b; }, [](auto& a, auto& b) { return a / b; }, true},
  };
  const int kCases = 100000;
  long violations = 0;
  for (int i = 0; i < kCases; ++i) {
    const Case& c = cases[i % 4];
    const Real scale = std::pow(10.0L, Real(int(rng() % 12) - 6));
    const Interval a = random_interval(rng, scale);
    Interval b = random_interval(rng, scale);
    if (c.needs_nonzero_divisor && b.contains_zero()) b = Interval(b.hi() + scale * 0.01L, b.hi() + scale);
    const Interval r = c.op(a, b);
    const Real x = sample(rng, a), y = sample(rng, b);
    if (!oracle::encloses(r, c.exact(big(x), big(y)))) ++violations;
    // Monotonicity: narrower inputs give a narrower result.
    const Interval a2 = random_subinterval(rng, a), b2 = random_subinterval(rng, b);
    if (!subset(c.op(a2, b2), r)) ++violations;
    // Degenerate inputs enclose the machine result.
    if (!c.op(Interval(x), Interval(y)).contains(c.name[0] == 'a'   ? x + y
                                                 : c.name[0] == 's' ? x - y
                                                 : c.name[0] == 'm' ? x * y
                                                                    : x / y))
      ++violations;
  }
  for (int i = 0; i < kCases / 4; ++i) {
    const Real scale = std::pow(10.0L, Real(int(rng() % 12) - 6));
    const Interval a = random_interval(rng, scale);
    const Interval pos(std::fabs(a.lo()) < std::fabs(a.hi()) ? std::fabs(a.lo()) : std::fabs(a.hi()),
                       magnitude(a));
    const Real x = sample(rng, pos);
    if (!oracle::encloses(sqrt(pos), boost::multiprecision::sqrt(big(x)))) ++violations;
    if (!oracle::encloses(pow_3_2(pos), big(x) * boost::multiprecision::sqrt(big(x)))) ++violations;
    const Big t = big(sample(rng, a));
    if (!oracle::encloses(sqr(a), t * t)) ++violations;
    const Interval sub = random_subinterval(rng, pos);
    if (!subset(sqrt(sub), sqrt(pos)) || !subset(pow_3_2(sub), pow_3_2(pos))) ++violations;
  }
  CHECK(violations == 0);
}
