#include <benchmark/benchmark.h>

#include "psdft/convolution.hpp"
#include "psdft/free_energy.hpp"
#include "psdft/solver.hpp"

using namespace psdft;

static void BM_barycentric_row(benchmark::State& state) {
  auto mg = make_mapped_grid(cheb_lobatto_grid(63), DomainMap1D::algebraic_semi(2.0));
  double y = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(interpolation_row(mg, y));
    y += 1e-6;
  }
}
BENCHMARK(BM_barycentric_row);

static void BM_hs_reduced(benchmark::State& state) {
  double n2 = 1.9, n3 = 0.37, vx = 0.1, vy = -0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hs_reduced(0.5, n2, n3, vx, vy));
  }
}
BENCHMARK(BM_hs_reduced);

static void BM_build_packing_operator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto src = halfspace_grid(1, n, 2.0, 2.0);
  auto wd = composite_weighted_density_grid(1, n, 2.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_operator(src, wd, kernel_hs_w3(0.5), default_M_fmt(n)));
  }
}
BENCHMARK(BM_build_packing_operator)->Arg(40)->Arg(80);

static void BM_operator_apply(benchmark::State& state) {
  auto src = halfspace_grid(20, 20, 2.0, 2.0);
  auto wd = composite_weighted_density_grid(20, 20, 2.0, 2.0);
  auto op = build_operator(src, wd, kernel_hs_w3(0.5), 25);
  Vector v = Vector::Random(src.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(v));
  }
}
BENCHMARK(BM_operator_apply);

static void BM_residual_1d(benchmark::State& state) {
  OperatorCache cache;
  FluidSpec spec;
  spec.mu = spec.bulk().mu(0.7151);
  auto dens = halfspace_grid(1, 60, 2.0, 2.0);
  auto wd = composite_weighted_density_grid(1, 60, 2.0, 2.0);
  FluidProblem prob(spec, dens, wd, cache, 35, 50);
  Vector z = prob.initial_z(0.7151);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prob.residual(z));
  }
}
BENCHMARK(BM_residual_1d);

BENCHMARK_MAIN();
