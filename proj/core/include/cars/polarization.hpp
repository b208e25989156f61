#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cars {

/// Normalized Jones vector in the (H, V) basis of the analyzing PBS.
class JonesVector {
 public:
  /// Normalizes (h, v); throws DomainError for a zero vector.
  JonesVector(std::complex<double> h, std::complex<double> v);

  std::complex<double> h() const { return h_; }
  std::complex<double> v() const { return v_; }
  double intensity_h() const { return std::norm(h_); }
  double intensity_v() const { return std::norm(v_); }

 private:
  std::complex<double> h_;
  std::complex<double> v_;
};

struct DetectionParams {
  /// PBS extinction ratio R (correct : leaked). Infinity means ideal.
  double pbs_extinction = 20.0;
  /// Quantum-efficiency ratio g₂/g₁ of the two PMTs (g₁ = 1).
  double pmt_eff_ratio = 0.9;
  /// Rotation error of the prepared input polarization, degrees.
  double prep_error_deg = 0.0;

  static DetectionParams ideal() {
    return {std::numeric_limits<double>::infinity(), 1.0, 0.0};
  }
  void validate() const;
  /// ℓ = 1/(R + 1); zero for an ideal PBS.
  double leakage() const;
};

JonesVector jones_linear(double theta_deg);

/// Conversion with both pumps linearly polarized at `pump_angle_deg`. At 45°
/// H and V convert with equal amplitude, so the map is the identity. Other
/// angles are outside the validated model: a warning is issued and the
/// identity is still returned.
JonesVector convert_polarization(const JonesVector& probe, double pump_angle_deg = 45.0);

struct ChannelRates {
  double ch1 = 0.0;  // H arm
  double ch2 = 0.0;  // V arm
};

/// Relative rates behind a PBS with leakage ℓ = 1/(R+1):
///   ch1 = g₁[(1−ℓ)|e_H|² + ℓ|e_V|²],  ch2 = g₂[(1−ℓ)|e_V|² + ℓ|e_H|²]
ChannelRates detect_channels(const JonesVector& signal, const DetectionParams& params);

struct PolarizationScan {
  std::vector<double> theta_deg;
  std::vector<double> ch1;
  std::vector<double> ch2;
};

struct PolarizationNoise {
  bool poisson = false;
  /// Expected counts on channel 1 for a fully transmitted H input.
  double peak_counts = 1000.0;
  std::uint64_t seed = 0;
};

/// Two-channel scan over input angles. The prepared state is
/// jones_linear(θ + ε); rates are relative unless noise.poisson is set, in
/// which case they are Poisson counts scaled by noise.peak_counts.
PolarizationScan polarization_scan(std::span<const double> theta_deg,
                                   const DetectionParams& params,
                                   const PolarizationNoise& noise = {},
                                   double pump_angle_deg = 45.0);

/// Mean correct-channel fraction over the H and V input states, with the
/// PMT gains equalized: F = (1−ℓ)cos²ε + ℓ sin²ε.
double fidelity(const DetectionParams& params);

}  // namespace cars
