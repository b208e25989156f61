#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cars/units.hpp"

namespace cars {

/// Pressure-dependent Raman line: centre ν₀ + s·P, Lorentzian FWHM Γ₀ + b·P.
struct ResonanceParams {
  Frequency nu0{124.571055};
  double shift_mhz_per_bar = -80.0;
  double broadening_mhz_per_bar = 40.0;  // FWHM
  double natural_width_mhz = 0.0;
};

struct ScanMeta {
  double pressure_bar = 0.0;
  double duration_s = 1.0;
  std::uint64_t seed = 0;
  // Absolute frequency of x = 0, THz.
  double reference_thz = 0.0;
};

/// A generic (x, y, σ) series. For resonance scans x is detuning in MHz
/// from meta.reference_thz and y is counts per point.
struct ScanData {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;
  ScanMeta meta;

  std::size_t size() const { return x.size(); }
  /// Throws DomainError on length mismatch or non-positive σ.
  void validate() const;
};

enum class NoiseModel { None, Poisson };

Frequency center_frequency(const ResonanceParams& params, Pressure p);

/// Lorentzian FWHM in MHz.
double fwhm(const ResonanceParams& params, Pressure p);

/// Peak-normalized Lorentzian (Γ/2)² / (δ² + (Γ/2)²). Throws DomainError
/// for Γ <= 0.
double lineshape(double delta_mhz, double gamma_mhz);

/// Counts-per-point scan across the line at pressure p. With NoiseModel::None
/// y lies exactly on the model; with Poisson each point is drawn from a
/// generator seeded by `seed`. σᵢ = √max(yᵢ, 1) in both cases.
ScanData synthesize_scan(const ResonanceParams& params, Pressure p,
                         std::span<const double> detuning_mhz, double peak_counts,
                         NoiseModel noise, std::uint64_t seed,
                         std::optional<Frequency> reference = std::nullopt,
                         double background_counts = 0.0);

/// Fractional pressure change that moves the line by one FWHM:
/// Γ(P) / (|s| · P). Throws DomainError for s = 0 or P <= 0.
double pressure_stability_bound(const ResonanceParams& params, Pressure p);

}  // namespace cars
