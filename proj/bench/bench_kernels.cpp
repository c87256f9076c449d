// Serial against OpenMP versions of the grid kernels and of full PA curves.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ncpa/grid_kernels.hpp"
#include "ncpa/proxavg.hpp"
#include "ncpa/worked_example.hpp"

using namespace ncpa;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

const Callback kBumpy = [](PointView x) {
  double s = 0.0;
  for (double v : x) s += std::sin(3.0 * v) + 0.1 * v * v;
  return s;
};

void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec grid = GridSpec::line(-4.0, 4.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(sample(kBumpy, grid, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_AddShiftedQuadratic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec grid = GridSpec::line(-4.0, 4.0, n);
  const std::vector<double> base = sample(kBumpy, grid, Execution::serial);
  std::vector<double> out(n);
  const double x = 0.3;
  for (auto _ : state) {
    add_shifted_quadratic(base, grid, 2.0, PointView(&x, 1), out, mode(state));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_PaCurve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ProxAverageProblem problem = make_example_problem(0.5, 2.0, mode(state));
  const ProxAverage pa(problem, SimplexWeight({0.4, 0.6}));
  const GridSpec grid = GridSpec::line(-1.0, 3.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(pa_curve(pa, grid, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_Sample)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}});
BENCHMARK(BM_AddShiftedQuadratic)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}});
BENCHMARK(BM_PaCurve)->ArgsProduct({{101, 401}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
