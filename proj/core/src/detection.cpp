#include "cars/detection.hpp"

#include <cmath>
#include <random>

#include "cars/diagnostics.hpp"

namespace cars {
namespace {

// Random-walk step per half-cycle, as a fraction of the drift bound.
constexpr double kDriftStepFraction = 0.1;

double reflect_into(double x, double bound) {
  if (bound <= 0.0) return 0.0;
  while (x > bound || x < -bound) {
    if (x > bound) x = 2.0 * bound - x;
    if (x < -bound) x = -2.0 * bound - x;
  }
  return x;
}

}  // namespace

void DetectorSpec::validate() const {
  if (!(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0))
    throw DomainError("quantum efficiency must lie in (0, 1]");
  if (!(dark_rate_cps >= 0.0)) throw DomainError("dark rate must be non-negative");
  if (!(drift_fraction >= 0.0 && drift_fraction < 1.0))
    throw DomainError("drift fraction must lie in [0, 1)");
}

std::vector<ChainElement> default_chain() {
  return {{"bandpass filter 1", 0.90},
          {"bandpass filter 2", 0.90},
          {"bandpass filter 3", 0.90},
          {"sapphire exit window", 0.854},
          {"dichroic mirrors", 0.915}};
}

double chain_transmission(std::span<const ChainElement> elements) {
  if (elements.empty()) throw DomainError("optical chain is empty");
  double t = 1.0;
  for (const auto& e : elements) {
    if (!(e.transmission > 0.0 && e.transmission <= 1.0))
      throw DomainError("transmission of '" + e.name + "' must lie in (0, 1]");
    t *= e.transmission;
  }
  return t;
}

double detection_probability(double internal_eta, std::span<const ChainElement> elements,
                             const DetectorSpec& detector) {
  if (!(internal_eta >= 0.0)) throw DomainError("internal efficiency must be non-negative");
  detector.validate();
  return internal_eta * chain_transmission(elements) * detector.quantum_efficiency;
}

std::string_view to_string(TogglePhase phase) { return phase == TogglePhase::On ? "on" : "off"; }

ToggleResult simulate_toggle_experiment(const DetectorSpec& detector, double extra_rate_cps,
                                        int n_cycles, double cycle_seconds, std::uint64_t seed) {
  detector.validate();
  if (n_cycles < 2) throw DomainError("toggle experiment needs at least 2 cycles");
  if (!(cycle_seconds > 0.0)) throw DomainError("cycle duration must be positive");
  if (!(extra_rate_cps >= 0.0)) throw DomainError("extra rate must be non-negative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, kDriftStepFraction * detector.drift_fraction);
  auto poisson = [&](double mean) {
    return mean > 0.0 ? std::poisson_distribution<long long>(mean)(rng) : 0LL;
  };

  ToggleResult out;
  out.records.reserve(2 * static_cast<std::size_t>(n_cycles));
  double drift = 0.0;
  long long total_on = 0, total_off = 0;
  double sum_d = 0.0, sum_d2 = 0.0;
  for (int k = 0; k < n_cycles; ++k) {
    drift = reflect_into(drift + step(rng), detector.drift_fraction);
    const long long on =
        poisson((detector.dark_rate_cps * (1.0 + drift) + extra_rate_cps) * cycle_seconds);
    drift = reflect_into(drift + step(rng), detector.drift_fraction);
    const long long off = poisson(detector.dark_rate_cps * (1.0 + drift) * cycle_seconds);
    out.records.push_back({k, TogglePhase::On, on});
    out.records.push_back({k, TogglePhase::Off, off});
    total_on += on;
    total_off += off;
    const double d = static_cast<double>(on - off) / cycle_seconds;
    sum_d += d;
    sum_d2 += d * d;
  }

  const double n = n_cycles;
  const double live = n * cycle_seconds;
  out.rate_on_cps = static_cast<double>(total_on) / live;
  out.rate_off_cps = static_cast<double>(total_off) / live;
  out.difference_cps = out.rate_on_cps - out.rate_off_cps;
  const double mean_d = sum_d / n;
  const double var_d = std::max(0.0, (sum_d2 - n * mean_d * mean_d) / (n - 1.0));
  double se = std::sqrt(var_d / n);
  if (!(se > 0.0)) se = std::sqrt(static_cast<double>(total_on + total_off)) / live;
  out.significance = se > 0.0 ? out.difference_cps / se : 0.0;
  return out;
}

}  // namespace cars
