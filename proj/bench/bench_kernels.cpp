// Serial vs OpenMP timings of the parallel kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "robreg/fixtures.hpp"
#include "robreg/moduli.hpp"
#include "robreg/pseudospec.hpp"
#include "robreg/regularize.hpp"
#include "robreg/setmap.hpp"

using namespace robreg;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_search(benchmark::State& st) {
  const Fixture f = load_fixture("sqrt_abs_2d");
  SearchConfig cfg;
  cfg.samples = 20000;
  for (auto _ : st) {
    benchmark::DoNotOptimize(robust_value_search(*f.model, f.domain, f.reference_point, 0.1, cfg, exec_of(st)).value);
  }
}

void BM_lip_shells(benchmark::State& st) {
  const Fixture f = load_fixture("example24b");
  SamplingConfig cfg;
  cfg.samples_per_radius = 50000;
  const PointFn F = f.model->as_point_fn();
  for (auto _ : st) benchmark::DoNotOptimize(lip_direct(F, f.domain, f.reference_point, cfg, exec_of(st)).value);
}

void BM_hausdorff(benchmark::State& st) {
  const DomainModel X = DomainModel::full_space(3);
  const geom::PointCloud a = geom::sample_ball_intersection(X, Vec::Zero(3), 1.0, 4000, 1);
  const geom::PointCloud b = geom::sample_ball_intersection(X, Vec::Constant(3, 0.1), 1.0, 4000, 2);
  for (auto _ : st) benchmark::DoNotOptimize(geom::hausdorff_distance(a, b, exec_of(st)));
}

void BM_pseudospectral_grid(benchmark::State& st) {
  CMat A = CMat::Random(8, 8);
  pseudo::GridConfig g;
  g.resolution = 128;
  for (auto _ : st) benchmark::DoNotOptimize(pseudo::pseudospectral_abscissa(A, 0.05, g, exec_of(st)).value);
}

}  // namespace

BENCHMARK(BM_search)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_lip_shells)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_hausdorff)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_pseudospectral_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
