#include <benchmark/benchmark.h>

#include <algorithm>

#include "membrane/closure.hpp"
#include "membrane/growth.hpp"
#include "membrane/lifting.hpp"
#include "membrane/stress.hpp"

using namespace membrane;

static void BM_ConvexHull(benchmark::State& state) {
  const Scene s = sample_poisson_scene(square_window(50), 0.0, 1.0, FixedDisk{1.0}, 1);
  std::vector<Point> pts;
  for (const Hole& h : s.holes) pts.push_back(h.center);
  pts.resize(std::min<std::size_t>(pts.size(), static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 2048)->Complexity();

static void BM_ClosureRun(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0)) / 10.0;
  const Scene s = sample_poisson_scene(square_window(30), 7.5, lambda, FixedDisk{1.0}, 2026);
  ClosureOptions opts;
  opts.area_scanlines = 256;
  for (auto _ : state) benchmark::DoNotOptimize(closure_run(s, s.window, opts));
  state.counters["holes"] = static_cast<double>(s.holes.size());
}
BENCHMARK(BM_ClosureRun)->Arg(1)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_GrowRun(benchmark::State& state) {
  const Scene s = sample_poisson_scene(square_window(30), 7.5, 1.0, FixedDisk{1.0}, 7);
  const int origin = nearest_disk(s, s.window.center());
  GrowthConfig cfg;
  cfg.k_max = 20;
  for (auto _ : state) benchmark::DoNotOptimize(grow_run(s, origin, cfg));
}
BENCHMARK(BM_GrowRun)->Unit(benchmark::kMillisecond);

static void BM_PinwheelLifting(benchmark::State& state) {
  const HoleSystem pin = pinwheel();
  for (auto _ : state) benchmark::DoNotOptimize(lifting_feasible(pin));
}
BENCHMARK(BM_PinwheelLifting)->Unit(benchmark::kMillisecond);

static void BM_SpiderWebLattice(benchmark::State& state) {
  const Framework fw = triangular_lattice(static_cast<int>(state.range(0)), 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(spider_web_lp(fw));
  state.counters["edges"] = static_cast<double>(fw.edges.size());
}
BENCHMARK(BM_SpiderWebLattice)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_BoxCoupling(benchmark::State& state) {
  BoxConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(box_coupling_run(3.0, cfg, ++seed));
}
BENCHMARK(BM_BoxCoupling)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
