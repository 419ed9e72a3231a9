#include "shockcontract/criterion.hpp"
#include "shockcontract/simulator.hpp"

#include <benchmark/benchmark.h>

using namespace shockcontract;

namespace {

const State kMhd{{1.0, 1.0, 0.0, 0.0}};

ContractionContext example_ctx() { return {example3x3(1.0), Family{2}, Vector::Zero(3), 0.05, 1.0}; }

void BM_Eigenstructure(benchmark::State& st) {
  const auto sys = mhd2d();
  for (auto _ : st) benchmark::DoNotOptimize(eigenstructure(sys, kMhd));
}
BENCHMARK(BM_Eigenstructure);

void BM_HugoniotTrace(benchmark::State& st) {
  const auto sys = mhd2d();
  for (auto _ : st) benchmark::DoNotOptimize(HugoniotCurve::trace(sys, kMhd, Family{2}, -0.1));
}
BENCHMARK(BM_HugoniotTrace);

void BM_DMax(benchmark::State& st) {
  const auto ctx = example_ctx();
  const State u{{0.004, -0.003, 0.002}};
  const int order = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_d_max(ctx, u, order));
}
BENCHMARK(BM_DMax)->Arg(0)->Arg(1)->Arg(2);

void BM_Feasibility(benchmark::State& st) {
  const auto data = criterion_data(mhd2d(), State{{100.0, 1.0, 0.0, 0.0}}, Family{2});
  for (auto _ : st) benchmark::DoNotOptimize(feasibility(data));
}
BENCHMARK(BM_Feasibility);

void BM_SimulatorShortRun(benchmark::State& st) {
  SimConfig c(example_ctx());
  c.cells = static_cast<int>(st.range(0));
  c.x_lo = -1.0;
  c.x_hi = 1.0;
  c.t_end = 0.05;
  for (auto _ : st) benchmark::DoNotOptimize(run(c));
}
BENCHMARK(BM_SimulatorShortRun)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
