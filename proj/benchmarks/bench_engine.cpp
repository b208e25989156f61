#include <vector>

#include <benchmark/benchmark.h>

#include "cars/fwm.hpp"

using namespace cars;

namespace {

std::vector<double> grid(double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(hi * i / (n - 1));
  return g;
}

void BM_RelativeEfficiency(benchmark::State& state) {
  const auto c = default_conversion_config();
  const Pressure p(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relative_efficiency(c, p));
}
BENCHMARK(BM_RelativeEfficiency)->Arg(2)->Arg(8)->Arg(16)->Arg(40);

void BM_PressureSweep(benchmark::State& state) {
  const auto c = default_conversion_config();
  const auto g = grid(16.0, 161);
  const SweepOptions opt{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(pressure_sweep(c, g, opt));
}
BENCHMARK(BM_PressureSweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_OptimizePressure(benchmark::State& state) {
  const auto c = default_conversion_config();
  for (auto _ : state) benchmark::DoNotOptimize(optimize_pressure(c, Pressure(0.1), Pressure(16.0)));
}
BENCHMARK(BM_OptimizePressure)->Unit(benchmark::kMillisecond);

}  // namespace
