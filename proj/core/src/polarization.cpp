#include "cars/polarization.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cars/diagnostics.hpp"
#include "cars/units.hpp"

namespace cars {
namespace {

double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace

JonesVector::JonesVector(std::complex<double> h, std::complex<double> v) {
  const double norm = std::sqrt(std::norm(h) + std::norm(v));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("Jones vector must be non-zero");
  h_ = h / norm;
  v_ = v / norm;
}

void DetectionParams::validate() const {
  if (!(pbs_extinction > 1.0)) throw DomainError("PBS extinction ratio must exceed 1");
  if (!(pmt_eff_ratio > 0.0)) throw DomainError("PMT efficiency ratio must be positive");
  if (!std::isfinite(prep_error_deg)) throw DomainError("preparation error must be finite");
}

double DetectionParams::leakage() const {
  return std::isinf(pbs_extinction) ? 0.0 : 1.0 / (pbs_extinction + 1.0);
}

JonesVector jones_linear(double theta_deg) {
  const double t = deg2rad(theta_deg);
  return {std::cos(t), std::sin(t)};
}

JonesVector convert_polarization(const JonesVector& probe, double pump_angle_deg) {
  if (std::abs(pump_angle_deg - 45.0) > 1e-9) {
    std::ostringstream msg;
    msg << "pump polarization " << pump_angle_deg
        << " deg: only 45 deg pumps are modeled; treating conversion as polarization-preserving";
    warn(msg.str());
  }
  return probe;
}

ChannelRates detect_channels(const JonesVector& signal, const DetectionParams& params) {
  params.validate();
  const double l = params.leakage();
  const double ih = signal.intensity_h();
  const double iv = signal.intensity_v();
  return {(1.0 - l) * ih + l * iv, params.pmt_eff_ratio * ((1.0 - l) * iv + l * ih)};
}

PolarizationScan polarization_scan(std::span<const double> theta_deg,
                                   const DetectionParams& params, const PolarizationNoise& noise,
                                   double pump_angle_deg) {
  if (theta_deg.empty()) throw DomainError("polarization scan grid is empty");
  params.validate();
  PolarizationScan scan;
  scan.theta_deg.assign(theta_deg.begin(), theta_deg.end());
  std::mt19937_64 rng(noise.seed);
  auto draw = [&](double mean) {
    return mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
  };
  for (double theta : theta_deg) {
    const auto signal =
        convert_polarization(jones_linear(theta + params.prep_error_deg), pump_angle_deg);
    auto r = detect_channels(signal, params);
    if (noise.poisson) {
      r.ch1 = draw(noise.peak_counts * r.ch1);
      r.ch2 = draw(noise.peak_counts * r.ch2);
    }
    scan.ch1.push_back(r.ch1);
    scan.ch2.push_back(r.ch2);
  }
  return scan;
}

double fidelity(const DetectionParams& params) {
  params.validate();
  const double l = params.leakage();
  const double e = deg2rad(params.prep_error_deg);
  const double c2 = std::cos(e) * std::cos(e);
  const double s2 = std::sin(e) * std::sin(e);
  return (1.0 - l) * c2 + l * s2;
}

}  // namespace cars
