#include "cars/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cars/diagnostics.hpp"

namespace cars {

void ScanData::validate() const {
  if (y.size() != x.size())
    throw DomainError("scan data: x and y lengths differ (" + std::to_string(x.size()) +
                      " vs " + std::to_string(y.size()) + ")");
  if (!sigma.empty() && sigma.size() != x.size())
    throw DomainError("scan data: sigma length differs from x");
  for (double s : sigma)
    if (!(s > 0.0)) throw DomainError("scan data: sigma must be positive");
}

Frequency center_frequency(const ResonanceParams& params, Pressure p) {
  if (p.value() < 0.0) throw DomainError("pressure must be non-negative");
  return Frequency(params.nu0.value() + params.shift_mhz_per_bar * p.value() * 1e-6);
}

double fwhm(const ResonanceParams& params, Pressure p) {
  if (p.value() < 0.0) throw DomainError("pressure must be non-negative");
  return params.natural_width_mhz + params.broadening_mhz_per_bar * p.value();
}

double lineshape(double delta_mhz, double gamma_mhz) {
  if (!(gamma_mhz > 0.0))
    throw DomainError("Lorentzian width must be positive, got " + std::to_string(gamma_mhz) +
                      " MHz");
  const double hw2 = 0.25 * gamma_mhz * gamma_mhz;
  return hw2 / (delta_mhz * delta_mhz + hw2);
}

ScanData synthesize_scan(const ResonanceParams& params, Pressure p,
                         std::span<const double> detuning_mhz, double peak_counts,
                         NoiseModel noise, std::uint64_t seed, std::optional<Frequency> reference,
                         double background_counts) {
  if (detuning_mhz.empty()) throw DomainError("scan grid is empty");
  if (!(peak_counts > 0.0)) throw DomainError("peak rate must be positive");

  const Frequency ref = reference.value_or(params.nu0);
  // Written as offset + s·P so the default reference gives exactly s·P.
  const double center_mhz =
      (params.nu0.value() - ref.value()) * 1e6 + params.shift_mhz_per_bar * p.value();
  const double gamma = fwhm(params, p);

  ScanData scan;
  scan.meta = {p.value(), 1.0, seed, ref.value()};
  scan.x.assign(detuning_mhz.begin(), detuning_mhz.end());
  scan.y.reserve(scan.x.size());
  scan.sigma.reserve(scan.x.size());

  std::mt19937_64 rng(seed);
  for (double x : scan.x) {
    const double mean = background_counts + peak_counts * lineshape(x - center_mhz, gamma);
    double y = mean;
    if (noise == NoiseModel::Poisson) {
      y = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
    }
    scan.y.push_back(y);
    scan.sigma.push_back(std::sqrt(std::max(y, 1.0)));
  }
  return scan;
}

double pressure_stability_bound(const ResonanceParams& params, Pressure p) {
  if (params.shift_mhz_per_bar == 0.0)
    throw DomainError("pressure stability bound undefined: line has no pressure shift");
  if (!(p.value() > 0.0)) throw DomainError("pressure must be positive");
  return fwhm(params, p) / (std::abs(params.shift_mhz_per_bar) * p.value());
}

}  // namespace cars
