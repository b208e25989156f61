#include "cars/beam.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "cars/diagnostics.hpp"

namespace cars {

double rayleigh_range(double waist_m, Wavelength lambda) {
  if (!(waist_m > 0.0)) throw DomainError("beam waist must be positive");
  if (!(lambda.value() > 0.0)) throw DomainError("wavelength must be positive");
  return kPi * waist_m * waist_m / to_meters(lambda);
}

ComplexEnvelope envelope(const BeamSpec& beam, double z_m) {
  if (!std::isfinite(z_m)) throw DomainError("axial position must be finite");
  const double zr = rayleigh_range(beam.waist_m, beam.lambda);
  const std::complex<double> q{1.0, (z_m - beam.focus_m) / zr};
  return {1.0 / q, 1.0 / (beam.waist_m * beam.waist_m * q)};
}

std::complex<double> transverse_overlap(const std::array<ComplexEnvelope, 4>& envelopes,
                                        const ConjugationPattern& pattern) {
  std::complex<double> product{1.0, 0.0};
  std::complex<double> alpha_sum{0.0, 0.0};
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    const bool conj = pattern[i] == Conj::Conjugate;
    product *= conj ? std::conj(envelopes[i].prefactor) : envelopes[i].prefactor;
    alpha_sum += conj ? std::conj(envelopes[i].alpha) : envelopes[i].alpha;
  }
  if (!(alpha_sum.real() > 0.0)) {
    std::ostringstream d;
    d << "sum of radial coefficients = " << alpha_sum;
    throw NumericalError("transverse overlap diverges: Re(sum alpha) <= 0", d.str());
  }
  return kPi * product / alpha_sum;
}

}  // namespace cars
