#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cars/resonance.hpp"

namespace cars {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double sigma = 0.0;  // 1σ
};

struct FitResult {
  std::string model;
  std::vector<FitParameter> params;
  double chi2_reduced = 0.0;
  int n_iterations = 0;
  bool converged = false;
  std::string diagnostics;

  /// Throws std::out_of_range for an unknown name.
  const FitParameter& param(std::string_view name) const;
  double value(std::string_view name) const { return param(name).value; }
  double sigma(std::string_view name) const { return param(name).sigma; }
};

struct LorentzianInit {
  double center = 0.0;
  double fwhm = 1.0;
  double amplitude = 1.0;
  double offset = 0.0;
};

/// Deterministic starting point: centre at the argmax, FWHM from the
/// half-maximum crossings, offset = min, amplitude = max − min.
LorentzianInit lorentzian_initial_guess(const ScanData& data);

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of
///   offset + amplitude · (Γ/2)² / ((x − center)² + (Γ/2)²)
/// weighted by data.sigma (√max(y, 1) when absent). Parameters: center,
/// fwhm, amplitude, offset. Degenerate input yields converged = false with
/// diagnostics, never an exception. Throws DomainError for fewer than 5
/// points.
FitResult fit_lorentzian(const ScanData& data, std::optional<LorentzianInit> init = std::nullopt);

/// Closed-form (weighted) straight line; parameters slope, intercept.
/// Without σ the standard errors are scaled by the residual variance.
/// Throws DomainError when fewer than 2 distinct x are given.
FitResult fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma = {});

/// offset + amplitude · cos²(θ − phase), solved linearly through
/// a + b cos 2θ + c sin 2θ. Phase in degrees, reported in (−90, 90].
/// Throws DomainError for fewer than 4 angles, a span below 180°, or a
/// rank-deficient design.
FitResult fit_malus(std::span<const double> theta_deg, std::span<const double> rates,
                    std::span<const double> sigma = {});

struct PressurePoint {
  double pressure_bar = 0.0;
  FitResult fit;  // a Lorentzian fit; its centre is in MHz from reference_thz
  double reference_thz = 0.0;
};

struct ZeroPressureFit {
  double nu0_thz = 0.0;
  double nu0_sigma_mhz = 0.0;
  double slope_mhz_per_bar = 0.0;
  double slope_sigma_mhz_per_bar = 0.0;
  FitResult line;  // centre (MHz from the first reference) vs pressure
};

/// Straight-line fit of fitted centres against pressure, extrapolated to
/// P = 0. Throws DomainError for fewer than 2 distinct pressures.
ZeroPressureFit zero_pressure_extrapolation(std::span<const PressurePoint> series);

}  // namespace cars
