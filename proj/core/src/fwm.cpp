#include "cars/fwm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "cars/diagnostics.hpp"
#include "cars/golden.hpp"

namespace cars {
namespace {

constexpr double kGridRefineTolBar = 1e-4;
constexpr double kOptimizeTolBar = 0.01;

void check_wavelength(const BeamSpec& beam, Wavelength expected, const char* role) {
  const double rel = std::abs(beam.lambda.value() - expected.value()) / expected.value();
  if (rel > 1e-9) {
    std::ostringstream msg;
    msg << role << " beam wavelength " << beam.lambda.value()
        << " nm does not match the quadruple (" << expected.value() << " nm)";
    throw DomainError(msg.str());
  }
}

void check_beam(const BeamSpec& beam, const char* role) {
  if (!(beam.waist_m > 0.0)) throw DomainError(std::string(role) + " beam waist must be positive");
  if (!(beam.power.value() >= 0.0))
    throw DomainError(std::string(role) + " beam power must be non-negative");
  if (!std::isfinite(beam.focus_m))
    throw DomainError(std::string(role) + " beam focus must be finite");
}

double mode_normalization(const ConversionConfig& c) {
  if (c.plane_wave) return 1.0;
  double norm = 1.0;
  for (double w : {c.pump_high.waist_m, c.pump_stokes.waist_m, c.probe.waist_m,
                   c.signal_mode().waist_m})
    norm *= 2.0 / (kPi * w * w);
  return norm;
}

struct Crossings {
  double width = std::numeric_limits<double>::quiet_NaN();
  bool resolved = false;
};

Crossings half_max_width(std::span<const double> x, std::span<const double> y, std::size_t peak,
                         double half) {
  auto interp = [&](std::size_t i0, std::size_t i1) {
    return x[i0] + (half - y[i0]) * (x[i1] - x[i0]) / (y[i1] - y[i0]);
  };
  std::optional<double> left, right;
  for (std::size_t j = peak; j-- > 0;) {
    if (y[j] < half) {
      left = interp(j, j + 1);
      break;
    }
  }
  for (std::size_t j = peak + 1; j < y.size(); ++j) {
    if (y[j] < half) {
      right = interp(j - 1, j);
      break;
    }
  }
  Crossings c;
  if (left && right) {
    c.width = *right - *left;
    c.resolved = true;
  }
  return c;
}

}  // namespace

void ConversionConfig::validate() const {
  if (!(cell_length_m > 0.0)) throw DomainError("cell length must be positive");
  if (!(temperature.value() > 0.0)) throw DomainError("temperature must be positive");
  if (density_exponent < 1) throw DomainError("density exponent must be >= 1");
  check_beam(pump_high, "pump_high");
  check_beam(pump_stokes, "pump_stokes");
  check_beam(probe, "probe");
  if (signal_waist_m && !(*signal_waist_m > 0.0))
    throw DomainError("signal mode waist must be positive");
  check_wavelength(pump_high, quadruple.wavelength(Field::PumpHigh), "pump_high");
  check_wavelength(pump_stokes, quadruple.wavelength(Field::PumpStokes), "pump_stokes");
  check_wavelength(probe, quadruple.wavelength(Field::Probe), "probe");
}

ConjugationPattern ConversionConfig::pattern() const {
  if (conjugation) return *conjugation;
  return quadruple.direction() == Direction::Upconversion ? kUpconversionPattern
                                                          : kDownconversionPattern;
}

BeamSpec ConversionConfig::signal_mode() const {
  BeamSpec s;
  s.waist_m = signal_waist_m.value_or(probe.waist_m);
  s.focus_m = probe.focus_m;
  s.lambda = quadruple.wavelength(Field::Signal);
  s.power = Power(0.0);
  s.polarization_deg = probe.polarization_deg;
  return s;
}

ConversionConfig default_conversion_config(Direction direction) {
  using namespace literals;
  ConversionConfig c(make_quadruple(434_nm, 938_nm, 1538_nm, direction));
  c.pump_high = {70e-6, 0.0, 938_nm, Power(0.5), 45.0};
  c.pump_stokes = {70e-6, 0.0, 1538_nm, Power(15.0), 45.0};
  c.probe = {70e-6, 0.0, 434_nm, Power(3e-3), 0.0};
  return c;
}

double phase_mismatch(const FWMQuadruple& q, const GasState& state, const DispersionModel& model) {
  const double scale = 2.0 * kPi / kSpeedOfLight;
  double dispersive = 0.0;
  for (Field f : {Field::PumpHigh, Field::PumpStokes, Field::Probe, Field::Signal}) {
    dispersive += q.mixing_sign(f) * refractivity(q.wavelength(f), state, model) *
                  to_hertz(q.frequency(f));
  }
  return scale * (to_hertz(q.vacuum_residual()) + dispersive);
}

std::complex<double> overlap_at(const ConversionConfig& config, double z_m) {
  if (config.plane_wave) return {1.0, 0.0};
  const std::array<ComplexEnvelope, 4> env{envelope(config.pump_high, z_m),
                                           envelope(config.pump_stokes, z_m),
                                           envelope(config.probe, z_m),
                                           envelope(config.signal_mode(), z_m)};
  return transverse_overlap(env, config.pattern());
}

std::complex<double> axial_integral(const ConversionConfig& config, double delta_k_per_m) {
  const double half = 0.5 * config.cell_length_m;
  const BeamSpec signal = config.signal_mode();
  auto integrand = [&](double z) {
    const std::complex<double> phase{0.0, delta_k_per_m * z};
    if (config.plane_wave) return std::exp(phase);
    const std::array<ComplexEnvelope, 4> env{envelope(config.pump_high, z),
                                             envelope(config.pump_stokes, z),
                                             envelope(config.probe, z), envelope(signal, z)};
    return transverse_overlap(env, config.pattern()) * std::exp(phase);
  };
  QuadratureOptions opt = config.quadrature;
  // At least ~2 panels per oscillation period of e^{iΔkz}.
  const double periods = std::abs(delta_k_per_m) * config.cell_length_m / (2.0 * kPi);
  opt.initial_panels =
      std::max(opt.initial_panels, static_cast<int>(std::min(2.0 * periods + 1.0, 65536.0)));
  return integrate_adaptive_simpson(integrand, -half, half, opt).value;
}

std::complex<double> axial_integral(const ConversionConfig& config, const GasState& state) {
  return axial_integral(config, phase_mismatch(config.quadruple, state, config.dispersion));
}

double relative_efficiency(const ConversionConfig& config, Pressure p) {
  if (p.value() < 0.0) throw DomainError("pressure must be non-negative");
  if (p.value() == 0.0) return 0.0;
  const GasState state(p, config.temperature);
  const double amagat = state.number_density() / config.dispersion.reference_density();
  const double s2 = std::norm(axial_integral(config, state));
  const double powers = config.pump_high.power.value() * config.pump_stokes.power.value();
  const double line = lineshape(config.detuning_mhz, fwhm(config.resonance, p));
  return std::pow(amagat, 2 * config.density_exponent) * s2 * mode_normalization(config) *
         powers * line;
}

double absolute_efficiency(const ConversionConfig& config, Pressure p) {
  if (!config.calibration)
    throw DomainError("absolute efficiency requested from an uncalibrated configuration");
  return *config.calibration * relative_efficiency(config, p);
}

ConversionConfig calibrate(const ConversionConfig& config, double measured_eta, Pressure at) {
  if (!(measured_eta > 0.0)) throw DomainError("measured efficiency must be positive");
  const double model = relative_efficiency(config, at);
  if (!(model > 0.0))
    throw DomainError("model efficiency is zero at the calibration pressure " +
                      std::to_string(at.value()) + " bar");
  ConversionConfig out = config;
  out.calibration = measured_eta / model;
  return out;
}

EfficiencyCurve pressure_sweep(const ConversionConfig& config, std::span<const double> grid_bar,
                               SweepOptions options) {
  config.validate();
  if (grid_bar.size() < 3) throw DomainError("pressure sweep needs at least 3 grid points");
  for (std::size_t i = 1; i < grid_bar.size(); ++i)
    if (!(grid_bar[i] > grid_bar[i - 1]))
      throw DomainError("pressure grid must be strictly increasing");
  if (grid_bar.front() < 0.0) throw DomainError("pressure grid must be non-negative");

  const std::size_t n = grid_bar.size();
  std::vector<double> raw(n);
  const unsigned threads =
      std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) raw[i] = relative_efficiency(config, Pressure(grid_bar[i]));
  } else {
    // Strided ownership: each slot written by exactly one worker.
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = t; i < n; i += threads)
              raw[i] = relative_efficiency(config, Pressure(grid_bar[i]));
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EfficiencyCurve curve;
  curve.pressures_bar.assign(grid_bar.begin(), grid_bar.end());
  const auto argmax = static_cast<std::size_t>(
      std::distance(raw.begin(), std::max_element(raw.begin(), raw.end())));
  const double grid_max = raw[argmax];

  double peak_rel = grid_max;
  curve.optimum_pressure_bar = grid_bar[argmax];
  if (argmax == 0 || argmax + 1 == n) {
    curve.optimum_at_boundary = true;
  } else {
    auto f = [&](double p) { return relative_efficiency(config, Pressure(p)); };
    const auto g = golden_section_maximize(f, grid_bar[argmax - 1], grid_bar[argmax + 1],
                                           kGridRefineTolBar);
    if (g.value > grid_max) {
      curve.optimum_pressure_bar = g.x;
      peak_rel = g.value;
    }
  }

  const double scale = config.calibration ? *config.calibration : 1.0;
  curve.normalized = !config.calibration.has_value();
  curve.peak_eta = scale * peak_rel;
  curve.eta.resize(n);
  const double div = curve.normalized ? (grid_max > 0.0 ? grid_max : 1.0) : 1.0;
  for (std::size_t i = 0; i < n; ++i) curve.eta[i] = scale * raw[i] / div;

  const double half = 0.5 * scale * peak_rel / div;
  const auto w = half_max_width(curve.pressures_bar, curve.eta, argmax, half);
  curve.fwhm_bar = w.width;
  curve.fwhm_resolved = w.resolved;
  return curve;
}

Pressure optimize_pressure(const ConversionConfig& config, Pressure lo, Pressure hi) {
  config.validate();
  if (lo.value() < 0.0) throw DomainError("pressure bounds must be non-negative");
  auto f = [&](double p) { return relative_efficiency(config, Pressure(p)); };
  return Pressure(maximize_bracketed(f, lo.value(), hi.value(), kOptimizeTolBar).x);
}

std::vector<WaistSensitivityRow> waist_sensitivity(const ConversionConfig& config,
                                                   std::span<const double> waists_m,
                                                   WaistTarget target,
                                                   std::span<const double> grid_bar) {
  std::vector<WaistSensitivityRow> rows;
  rows.reserve(waists_m.size());
  for (double w : waists_m) {
    if (!(w > 0.0)) throw DomainError("waists must be positive");
    ConversionConfig c = config;
    c.calibration.reset();
    if (target == WaistTarget::Pumps) {
      c.pump_high.waist_m = w;
      c.pump_stokes.waist_m = w;
    } else {
      // Only the probe changes; the signal mode keeps its configured waist.
      c.signal_waist_m = config.signal_mode().waist_m;
      c.probe.waist_m = w;
    }
    const auto curve = pressure_sweep(c, grid_bar);
    rows.push_back({w, curve.optimum_pressure_bar, curve.peak_eta, curve.fwhm_bar});
  }
  return rows;
}

}  // namespace cars
