#pragma once

#include <array>
#include <complex>

#include "cars/units.hpp"

namespace cars {

/// One focused TEM00 beam.
struct BeamSpec {
  double waist_m = 70e-6;
  double focus_m = 0.0;  // along the cell axis, 0 = cell centre
  Wavelength lambda{434.0};
  Power power{1.0};
  double polarization_deg = 0.0;
};

/// Complex Gaussian envelope at one axial position:
///   E(r, z) / E₀ = prefactor · exp(−α r²)
/// with ζ = (z − z₀)/z_R, prefactor = 1/(1 + iζ), α = 1/(w₀²(1 + iζ)).
struct ComplexEnvelope {
  std::complex<double> prefactor{1.0, 0.0};
  std::complex<double> alpha{0.0, 0.0};  // 1/m²
};

enum class Conj { Plain, Conjugate };

/// Conjugation applied to (pump_high, pump_stokes, probe, signal projection).
using ConjugationPattern = std::array<Conj, 4>;

/// (+,−,+,−): conjugate the Stokes pump and the signal-mode projection.
inline constexpr ConjugationPattern kUpconversionPattern{Conj::Plain, Conj::Conjugate,
                                                         Conj::Plain, Conj::Conjugate};
/// (−,+,+,−): energy flow reversed through the pump pair.
inline constexpr ConjugationPattern kDownconversionPattern{Conj::Conjugate, Conj::Plain,
                                                           Conj::Plain, Conj::Conjugate};
/// E_pH · E_pS · E_probe* projected on the signal mode, as literally written
/// in the source formula; kept for comparison only.
inline constexpr ConjugationPattern kLiteralPattern{Conj::Plain, Conj::Plain,
                                                    Conj::Conjugate, Conj::Conjugate};

/// z_R = π w₀² / λ (vacuum wavelength), metres.
double rayleigh_range(double waist_m, Wavelength lambda);

ComplexEnvelope envelope(const BeamSpec& beam, double z_m);

/// Closed form of ∫₀^∞ Π envelopes 2πr dr:
///   A = π · Π prefactor⁽*⁾ / Σ α⁽*⁾
/// Units m². Throws NumericalError if Re Σα <= 0 (cannot happen for valid
/// envelopes).
std::complex<double> transverse_overlap(const std::array<ComplexEnvelope, 4>& envelopes,
                                        const ConjugationPattern& pattern = kUpconversionPattern);

}  // namespace cars
