#include <benchmark/benchmark.h>

#include <random>

#include "ccproof/covering.hpp"

using namespace ccproof;

namespace {

const MassPoint kMixed{0.2L, 0.3L, 0.4L};

const CertifiedSolution& mixed() {
  static const CertifiedSolution s = [] {
    SearchConfig cfg;
    cfg.grid_n1 = 15;
    return certify_unique(kMixed, cfg);
  }();
  return s;
}

void BM_IntervalMulDiv(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 2);
  std::vector<Interval> v;
  for (int i = 0; i < 1024; ++i) {
    const Real a = u(rng);
    v.emplace_back(a, a + 1e-3L);
  }
  for (auto _ : state) {
    Interval acc(1);
    for (const auto& x : v) acc = acc * x / (x + Interval(1));
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_IntervalMulDiv);

void BM_ResidualsOverBox(benchmark::State& state) {
  Box b = mixed().enclosure;
  for (auto& c : b) c = Interval(c.lo() - 1e-3L, c.hi() + 1e-3L);
  const auto m = MassInterval::from_point(kMixed).as_array();
  for (auto _ : state) benchmark::DoNotOptimize(residuals_six(b, m));
}
BENCHMARK(BM_ResidualsOverBox);

void BM_KrawczykStep(benchmark::State& state) {
  Box b = mixed().enclosure;
  for (auto& c : b) c = Interval(c.lo() - 1e-6L, c.hi() + 1e-6L);
  for (auto _ : state) benchmark::DoNotOptimize(krawczyk_step(b, kMixed));
}
BENCHMARK(BM_KrawczykStep);

void BM_Certify(benchmark::State& state) {
  SearchConfig cfg;
  cfg.grid_n1 = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify_unique(kMixed, cfg));
}
BENCHMARK(BM_Certify)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RigorousIft(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ift_constants(mixed().enclosure, kMixed, 0.1L, 0.2L, IftMode::Rigorous));
}
BENCHMARK(BM_RigorousIft)->Unit(benchmark::kMillisecond);

void BM_ReferenceIft(benchmark::State& state) {
  ReferenceSampling s;
  s.samples = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ift_constants(mixed().enclosure, kMixed, 0.1L, 0.2L, IftMode::Reference, s));
}
BENCHMARK(BM_ReferenceIft)->Arg(256)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_Exclusion(benchmark::State& state) {
  const UniquenessBall ball = make_ball(mixed(), 0.1L, 0.2L, IftMode::Rigorous);
  const auto region = complement_boxes(ball.center_x, ball.inner_half_width());
  const auto masses = MassInterval::cube(kMixed, rounding::div_down(ball.epsilon, rounding::sqrt_up(3)));
  for (auto _ : state) benchmark::DoNotOptimize(exclude(region, masses));
}
BENCHMARK(BM_Exclusion)->Unit(benchmark::kMillisecond);

void BM_VerifyCovering(benchmark::State& state) {
  const MassGrid g{0.9L, int(state.range(0))};
  const Real h = (1 - g.delta0) / g.M1 * 0.6L;
  std::vector<Certificate> certs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Certificate c;
    c.index = i;
    c.mass = g.point(i);
    c.solution = CertifiedSolution{};
    IftConstants k;
    k.epsilon = 2 * h;
    c.ift = k;
    ExclusionReport e;
    e.status = ExclusionStatus::Excluded;
    c.exclusion = e;
    c.mass_half_width = h;
    certs.push_back(c);
  }
  for (auto _ : state) benchmark::DoNotOptimize(verify_covering(certs, g));
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.size()));
}
BENCHMARK(BM_VerifyCovering)->Arg(11)->Arg(39)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler.
BENCHMARK_MAIN();
