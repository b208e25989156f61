#pragma once

#include "cars/units.hpp"

namespace cars {

/// Two-term dispersion formula for a gas at its reference state:
///
///   (n − 1) = scale · [A₁/(B₁ − σ²) + A₂/(B₂ − σ²)],   σ = 1/λ in µm⁻¹
///
/// Defaults are the molecular-hydrogen coefficients referenced to
/// 273.15 K and 1.01325 bar.
class DispersionModel {
 public:
  struct Coefficients {
    double a1 = 14895.6;
    double b1 = 180.7;
    double a2 = 4903.7;
    double b2 = 92.0;
    double scale = 1e-6;
  };

  DispersionModel() : DispersionModel(Coefficients{}) {}
  explicit DispersionModel(Coefficients c, Temperature ref_temperature = Temperature(273.15),
                           Pressure ref_pressure = Pressure(1.01325));

  static DispersionModel hydrogen() { return DispersionModel(); }

  const Coefficients& coefficients() const { return c_; }
  Temperature reference_temperature() const { return ref_t_; }
  Pressure reference_pressure() const { return ref_p_; }
  /// Number density at the reference state, 1/m³.
  double reference_density() const { return ref_density_; }

  static constexpr double kValidMinNm = 300.0;
  static constexpr double kValidMaxNm = 2000.0;

 private:
  Coefficients c_;
  Temperature ref_t_;
  Pressure ref_p_;
  double ref_density_;
};

/// Ideal-gas number density ρ = P/(k_B T) in 1/m³. Throws DomainError for
/// T <= 0 or P < 0.
double number_density(Pressure p, Temperature t);

/// Thermodynamic state of the gas; the number density is derived.
class GasState {
 public:
  GasState(Pressure p, Temperature t);

  Pressure pressure() const { return p_; }
  Temperature temperature() const { return t_; }
  double number_density() const { return rho_; }

 private:
  Pressure p_;
  Temperature t_;
  double rho_;
};

/// (n − 1) at the model's reference state. Warns (does not fail) outside
/// [300, 2000] nm; throws DomainError at a pole of the formula.
double refractivity_std(Wavelength lambda, const DispersionModel& model = DispersionModel{});

/// (n − 1) at an arbitrary state, scaled from the reference state with the
/// Lorentz-Lorenz relation. Computed without forming n, so it keeps full
/// relative precision at low density.
double refractivity(Wavelength lambda, const GasState& state,
                    const DispersionModel& model = DispersionModel{});

/// n(λ, state). Exactly 1 in vacuum. Throws DomainError if the
/// Lorentz-Lorenz argument reaches 1.
double refractive_index(Wavelength lambda, const GasState& state,
                        const DispersionModel& model = DispersionModel{});

/// k = 2π n / λ in 1/m.
double wavevector(Wavelength lambda, const GasState& state,
                  const DispersionModel& model = DispersionModel{});

}  // namespace cars
