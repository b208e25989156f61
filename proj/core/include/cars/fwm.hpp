#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "cars/beam.hpp"
#include "cars/dispersion.hpp"
#include "cars/quadrature.hpp"
#include "cars/resonance.hpp"
#include "cars/units.hpp"

namespace cars {

/// Everything needed to evaluate the conversion efficiency at a pressure.
///
/// Beams are listed by role; their wavelengths must match the quadruple.
/// The signal is projected onto a Gaussian mode at the signal wavelength
/// whose waist defaults to the probe waist (and whose focus is the probe's).
struct ConversionConfig {
  explicit ConversionConfig(FWMQuadruple q) : quadruple(q) {}

  FWMQuadruple quadruple;
  BeamSpec pump_high;
  BeamSpec pump_stokes;
  BeamSpec probe;
  std::optional<double> signal_waist_m;
  double cell_length_m = 0.140;
  Temperature temperature{293.15};
  DispersionModel dispersion;
  ResonanceParams resonance;
  double detuning_mhz = 0.0;
  /// Absolute efficiency per model unit, set by calibrate().
  std::optional<double> calibration;
  /// Signal field ∝ ρ^m; intensity ∝ ρ^(2m).
  int density_exponent = 1;
  /// Overrides the direction's physical conjugation pattern.
  std::optional<ConjugationPattern> conjugation;
  /// Replace every envelope by 1 (unit transverse area); kernel tests only.
  bool plane_wave = false;
  QuadratureOptions quadrature;

  /// Throws DomainError when the configuration is inconsistent.
  void validate() const;
  ConjugationPattern pattern() const;
  BeamSpec signal_mode() const;
};

/// Default geometry: 434/938/1538 nm, 70 µm waists focused at the cell
/// centre, 0.5 W (938 nm) and 15 W (1538 nm) pumps, 3 mW probe, 140 mm cell,
/// 293.15 K.
ConversionConfig default_conversion_config(Direction direction = Direction::Upconversion);

/// Signed wavevector sum Δk (1/m). Upconversion: k_pH − k_pS + k_probe − k_s;
/// downconversion: −k_pH + k_pS + k_probe − k_s. The vacuum part is formed
/// from the exact frequency residual, so Δk(P = 0) is exactly zero.
double phase_mismatch(const FWMQuadruple& q, const GasState& state,
                      const DispersionModel& model = DispersionModel{});

/// Transverse overlap A(z) of the configured beams (1 in plane-wave mode).
std::complex<double> overlap_at(const ConversionConfig& config, double z_m);

/// S = ∫_{−L/2}^{L/2} A(z) e^{iΔk z} dz for an explicit Δk.
std::complex<double> axial_integral(const ConversionConfig& config, double delta_k_per_m);
/// Same, with Δk taken from the gas state.
std::complex<double> axial_integral(const ConversionConfig& config, const GasState& state);

/// Efficiency in model units:
///   ρ^(2m) · |S|² · Π 2/(πwⱼ²) · P_pH · P_pS · lineshape(δ, Γ(P))
/// with ρ in amagat and powers in W. Exactly zero at P = 0.
double relative_efficiency(const ConversionConfig& config, Pressure p);

/// calibration · relative_efficiency. Throws DomainError if uncalibrated.
double absolute_efficiency(const ConversionConfig& config, Pressure p);

/// Returns a copy of `config` whose calibration maps the model to
/// `measured_eta` at pressure `at`.
ConversionConfig calibrate(const ConversionConfig& config, double measured_eta, Pressure at);

struct EfficiencyCurve {
  std::vector<double> pressures_bar;
  std::vector<double> eta;
  bool normalized = false;
  double optimum_pressure_bar = 0.0;
  /// Model efficiency at the refined optimum (same units as relative or
  /// absolute efficiency, never normalized).
  double peak_eta = 0.0;
  double fwhm_bar = 0.0;
  bool optimum_at_boundary = false;
  bool fwhm_resolved = false;
};

struct SweepOptions {
  unsigned threads = 1;
};

/// Efficiency on a monotone grid (>= 3 points). Normalized to the grid
/// maximum unless the config is calibrated. The optimum is refined by
/// golden-section between the grid neighbours of the discrete maximum; the
/// FWHM comes from linear interpolation of the half-maximum crossings. An
/// optimum on the grid boundary is flagged, not refined.
EfficiencyCurve pressure_sweep(const ConversionConfig& config, std::span<const double> grid_bar,
                               SweepOptions options = {});

/// Maximizes relative efficiency over [lo, hi] to 0.01 bar. Throws
/// DomainError if the maximum is not interior.
Pressure optimize_pressure(const ConversionConfig& config, Pressure lo, Pressure hi);

enum class WaistTarget { Pumps, Probe };

struct WaistSensitivityRow {
  double waist_m = 0.0;
  double optimum_pressure_bar = 0.0;
  double peak_eta = 0.0;
  double fwhm_bar = 0.0;
};

/// Sweeps once per waist. Pumps: both pump waists are set. Probe: only the
/// probe waist is set; the signal mode stays at its configured waist.
std::vector<WaistSensitivityRow> waist_sensitivity(const ConversionConfig& config,
                                                   std::span<const double> waists_m,
                                                   WaistTarget target,
                                                   std::span<const double> grid_bar);

}  // namespace cars
