#include "cars/units.hpp"

#include <cmath>
#include <string>

#include "cars/diagnostics.hpp"

namespace cars {

Frequency wavelength_to_frequency(Wavelength lambda) {
  if (!(lambda.value() > 0.0) || !std::isfinite(lambda.value()))
    throw DomainError("wavelength must be positive and finite, got " +
                      std::to_string(lambda.value()) + " nm");
  return Frequency(kSpeedOfLightNmTHz / lambda.value());
}

Wavelength frequency_to_wavelength(Frequency nu) {
  if (!(nu.value() > 0.0) || !std::isfinite(nu.value()))
    throw DomainError("frequency must be positive and finite, got " +
                      std::to_string(nu.value()) + " THz");
  return Wavelength(kSpeedOfLightNmTHz / nu.value());
}

std::string_view to_string(Direction d) {
  return d == Direction::Upconversion ? "up" : "down";
}

Direction parse_direction(std::string_view text) {
  if (text == "up" || text == "upconversion") return Direction::Upconversion;
  if (text == "down" || text == "downconversion") return Direction::Downconversion;
  throw DomainError("unknown conversion direction '" + std::string(text) +
                    "' (expected 'up' or 'down')");
}

int FWMQuadruple::mixing_sign(Field f) const {
  const bool up = direction_ == Direction::Upconversion;
  switch (f) {
    case Field::PumpHigh: return up ? +1 : -1;
    case Field::PumpStokes: return up ? -1 : +1;
    case Field::Probe: return +1;
    case Field::Signal: return -1;
  }
  return 0;
}

Frequency FWMQuadruple::vacuum_residual() const {
  const double probe = nu_[2].value();
  const double high = nu_[0].value();
  const double stokes = nu_[1].value();
  const double mixed = direction_ == Direction::Upconversion ? (probe + high) - stokes
                                                             : (probe - high) + stokes;
  return Frequency(mixed - nu_[3].value());
}

FWMQuadruple make_quadruple(Wavelength probe, Wavelength pump_high, Wavelength pump_stokes,
                            Direction direction) {
  FWMQuadruple q;
  q.direction_ = direction;
  q.lambda_[0] = pump_high;
  q.lambda_[1] = pump_stokes;
  q.lambda_[2] = probe;
  q.nu_[0] = wavelength_to_frequency(pump_high);
  q.nu_[1] = wavelength_to_frequency(pump_stokes);
  q.nu_[2] = wavelength_to_frequency(probe);

  const double p = q.nu_[2].value();
  const double h = q.nu_[0].value();
  const double s = q.nu_[1].value();
  // Operation order must match vacuum_residual().
  const double signal = direction == Direction::Upconversion ? (p + h) - s : (p - h) + s;
  if (!(signal > 0.0))
    throw DomainError("unphysical quadruple: signal frequency " + std::to_string(signal) +
                      " THz is not positive");
  q.nu_[3] = Frequency(signal);
  q.lambda_[3] = frequency_to_wavelength(q.nu_[3]);
  return q;
}

}  // namespace cars
