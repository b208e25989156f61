#include <vector>

#include <benchmark/benchmark.h>

#include "cars/fit.hpp"
#include "cars/resonance.hpp"

using namespace cars;

namespace {

ScanData scan(int points, NoiseModel noise) {
  const ResonanceParams r;
  const Pressure p(8.0);
  const double g = fwhm(r, p);
  const double c = r.shift_mhz_per_bar * p.value();
  std::vector<double> x;
  for (int i = 0; i < points; ++i) x.push_back(c - 3.0 * g + 6.0 * g * i / (points - 1));
  return synthesize_scan(r, p, x, 400.0, noise, 17);
}

void BM_FitLorentzian(benchmark::State& state) {
  const auto data = scan(static_cast<int>(state.range(0)), NoiseModel::Poisson);
  for (auto _ : state) benchmark::DoNotOptimize(fit_lorentzian(data));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitLorentzian)->RangeMultiplier(4)->Range(25, 1600)->Complexity();

void BM_SynthesizeScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan(100, NoiseModel::Poisson));
}
BENCHMARK(BM_SynthesizeScan);

}  // namespace
