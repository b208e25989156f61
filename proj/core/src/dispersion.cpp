#include "cars/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "cars/diagnostics.hpp"

namespace cars {
namespace {

// Molecular polarizability term (n²−1)/(n²+2) written in terms of r = n−1.
double lorentz_lorenz_from_refractivity(double r) {
  const double n2m1 = r * (2.0 + r);
  return n2m1 / (3.0 + n2m1);
}

}  // namespace

DispersionModel::DispersionModel(Coefficients c, Temperature ref_temperature,
                                 Pressure ref_pressure)
    : c_(c), ref_t_(ref_temperature), ref_p_(ref_pressure) {
  if (!(ref_p_.value() > 0.0))
    throw DomainError("dispersion reference pressure must be positive");
  if (!(c_.scale > 0.0)) throw DomainError("dispersion scale must be positive");
  ref_density_ = number_density(ref_p_, ref_t_);
}

double number_density(Pressure p, Temperature t) {
  if (!(t.value() > 0.0) || !std::isfinite(t.value()))
    throw DomainError("temperature must be positive, got " + std::to_string(t.value()) + " K");
  if (!(p.value() >= 0.0) || !std::isfinite(p.value()))
    throw DomainError("pressure must be non-negative, got " + std::to_string(p.value()) +
                      " bar");
  return to_pascal(p) / (kBoltzmann * t.value());
}

GasState::GasState(Pressure p, Temperature t) : p_(p), t_(t), rho_(cars::number_density(p, t)) {}

double refractivity_std(Wavelength lambda, const DispersionModel& model) {
  if (!(lambda.value() > 0.0))
    throw DomainError("wavelength must be positive, got " + std::to_string(lambda.value()) +
                      " nm");
  if (lambda.value() < DispersionModel::kValidMinNm ||
      lambda.value() > DispersionModel::kValidMaxNm) {
    std::ostringstream msg;
    msg << "dispersion formula evaluated at " << lambda.value()
        << " nm, outside its validated range [300, 2000] nm";
    warn(msg.str());
  }
  const auto& c = model.coefficients();
  const double um = lambda.value() * 1e-3;
  const double sigma2 = 1.0 / (um * um);
  const double d1 = c.b1 - sigma2;
  const double d2 = c.b2 - sigma2;
  constexpr double kPoleGuard = 1e-12;
  if (std::abs(d1) < kPoleGuard * c.b1 || std::abs(d2) < kPoleGuard * c.b2)
    throw DomainError("wavelength " + std::to_string(lambda.value()) +
                      " nm sits on a pole of the dispersion formula");
  return c.scale * (c.a1 / d1 + c.a2 / d2);
}

double refractivity(Wavelength lambda, const GasState& state, const DispersionModel& model) {
  const double rho = state.number_density();
  if (rho == 0.0) return 0.0;
  const double ll_ref = lorentz_lorenz_from_refractivity(refractivity_std(lambda, model));
  const double x = ll_ref * rho / model.reference_density();
  if (!(x < 1.0))
    throw DomainError("Lorentz-Lorenz argument reached 1 (unphysically dense gas)");
  // n² − 1 = 3x/(1−x);  n − 1 = (n² − 1)/(n + 1)
  const double n2m1 = 3.0 * x / (1.0 - x);
  return n2m1 / (std::sqrt(1.0 + n2m1) + 1.0);
}

double refractive_index(Wavelength lambda, const GasState& state, const DispersionModel& model) {
  return 1.0 + refractivity(lambda, state, model);
}

double wavevector(Wavelength lambda, const GasState& state, const DispersionModel& model) {
  return 2.0 * kPi * refractive_index(lambda, state, model) / to_meters(lambda);
}

}  // namespace cars
