#include <benchmark/benchmark.h>

#include "lagbill/integrals.hpp"
#include "lagbill/sampling.hpp"

using namespace lagbill;

namespace {

const LagrangeParams kParams{1.0, 0.8, -0.3};

SpaceForm space_for(int which, int n) {
  switch (which) {
    case 0: return SpaceForm::chart(n, 0.5);
    case 1: return SpaceForm::sphere(n, 0.5);
    default: return SpaceForm::hyperboloid(n, 0.5);
  }
}

// Same start as the CLI's built-in scenario.
PhaseState start(const SpaceForm& s) {
  const SpaceForm c = s.chart_form();
  const bool hyp = c.branch == Branch::Hyperbolic;
  const double q0[] = {0.2, 0.3, 0.1, -0.15, 0.05}, v0[] = {1.2, -0.9, 1.6, 0.4, -0.7};
  PhaseState x{Vec::Zero(s.n + 1), Vec::Zero(s.n + 1), 0.0};
  for (int i = 0; i < s.n; ++i) {
    x.q[i] = q0[i % 5] * (hyp ? 0.5 : 1.0);
    x.v[i] = v0[i % 5] * (hyp ? 0.7 : 1.0);
  }
  x.q[s.n] = -1.0;
  return s.curved() ? push_state(c, x) : x;
}

}  // namespace

// args: geometry (0 chart, 1 sphere, 2 hyperboloid), n
static void BM_Step(benchmark::State& state) {
  const SpaceForm s = space_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const PhaseState x = start(s);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, kParams, x, 1e-3));
}
BENCHMARK(BM_Step)->ArgsProduct({{0, 1, 2}, {3, 5}});

static void BM_Simulate100Reflections(benchmark::State& state) {
  const SpaceForm s = space_for(static_cast<int>(state.range(0)), 3);
  const QuadricWall chart_wall = QuadricWall::from_focus(s.chart_form(), WallKind::Spheroid,
                                                         s.chart_form().branch == Branch::Hyperbolic ? 0.6 : 0.9);
  const QuadricWall w = s.curved() ? project_wall(chart_wall) : chart_wall;
  const PhaseState x = start(s);
  for (auto _ : state) {
    const Trajectory tr = simulate(s, kParams, {w}, x, {1e4, 100});
    benchmark::DoNotOptimize(tr.samples.size());
  }
}
BENCHMARK(BM_Simulate100Reflections)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_PoissonBracket(benchmark::State& state) {
  const SpaceForm s = space_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto fam = integral_family(s, kParams);
  const PhaseState x = start(s);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(fam[0], fam[1], x));
}
BENCHMARK(BM_PoissonBracket)->ArgsProduct({{0, 1, 2}, {3, 5}});

static void BM_JacobianRank(benchmark::State& state) {
  const SpaceForm s = space_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto fam = integral_family(s, kParams);
  const PhaseState x = start(s);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_rank(fam, x));
}
BENCHMARK(BM_JacobianRank)->ArgsProduct({{0, 1, 2}, {3, 5}});

BENCHMARK_MAIN();
