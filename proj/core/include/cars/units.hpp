#pragma once

#include <array>
#include <compare>
#include <string_view>

namespace cars {

// Canonical units are fixed per quantity type: THz, nm (vacuum), bar, K, W.
// Every conversion to SI goes through the helpers in this header.

inline constexpr double kSpeedOfLight = 299'792'458.0;       // m/s, exact
inline constexpr double kSpeedOfLightNmTHz = 299'792.458;     // nm * THz
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K, exact
inline constexpr double kPascalPerBar = 1.0e5;
inline constexpr double kPi = 3.14159265358979323846;

template <class Tag>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double value) : value_(value) {}

  constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(Quantity, Quantity) = default;

  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
  friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.value_ * s); }
  friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.value_ * s); }
  friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.value_ / s); }

 private:
  double value_ = 0.0;
};

using Frequency = Quantity<struct FrequencyTag>;      // THz
using Wavelength = Quantity<struct WavelengthTag>;    // nm, vacuum
using Pressure = Quantity<struct PressureTag>;        // bar
using Temperature = Quantity<struct TemperatureTag>;  // K
using Power = Quantity<struct PowerTag>;              // W

namespace literals {
constexpr Frequency operator""_THz(long double v) { return Frequency(static_cast<double>(v)); }
constexpr Wavelength operator""_nm(long double v) { return Wavelength(static_cast<double>(v)); }
constexpr Wavelength operator""_nm(unsigned long long v) { return Wavelength(static_cast<double>(v)); }
constexpr Pressure operator""_bar(long double v) { return Pressure(static_cast<double>(v)); }
constexpr Pressure operator""_bar(unsigned long long v) { return Pressure(static_cast<double>(v)); }
constexpr Temperature operator""_K(long double v) { return Temperature(static_cast<double>(v)); }
constexpr Power operator""_W(long double v) { return Power(static_cast<double>(v)); }
}  // namespace literals

constexpr double to_meters(Wavelength w) { return w.value() * 1e-9; }
constexpr double to_hertz(Frequency f) { return f.value() * 1e12; }
constexpr double to_pascal(Pressure p) { return p.value() * kPascalPerBar; }

/// ν = c/λ. Throws DomainError for λ <= 0 (or non-finite).
Frequency wavelength_to_frequency(Wavelength lambda);
/// λ = c/ν. Throws DomainError for ν <= 0 (or non-finite).
Wavelength frequency_to_wavelength(Frequency nu);

enum class Direction { Upconversion, Downconversion };

std::string_view to_string(Direction d);
/// Accepts "up"/"upconversion" and "down"/"downconversion" (case-sensitive).
Direction parse_direction(std::string_view text);

/// The four fields of the mixing process, in the fixed order used by every
/// per-field array in this library.
enum class Field { PumpHigh = 0, PumpStokes = 1, Probe = 2, Signal = 3 };

/// Energy-conserving set of four fields.
///
/// Upconversion:   ν_signal = ν_probe + ν_pump_high − ν_pump_stokes
/// Downconversion: ν_signal = ν_probe − ν_pump_high + ν_pump_stokes
///
/// Immutable once built; only make_quadruple constructs one.
class FWMQuadruple {
 public:
  Direction direction() const { return direction_; }
  Frequency frequency(Field f) const { return nu_[static_cast<int>(f)]; }
  Wavelength wavelength(Field f) const { return lambda_[static_cast<int>(f)]; }

  /// Sign with which each field's wavevector enters Δk (+1 or −1).
  int mixing_sign(Field f) const;

  /// Signed frequency sum Σ sᵢνᵢ evaluated in the same operation order as
  /// construction. Exactly zero in floating point.
  Frequency vacuum_residual() const;

 private:
  friend FWMQuadruple make_quadruple(Wavelength, Wavelength, Wavelength, Direction);
  FWMQuadruple() = default;

  Direction direction_ = Direction::Upconversion;
  std::array<Frequency, 4> nu_{};
  std::array<Wavelength, 4> lambda_{};
};

FWMQuadruple make_quadruple(Wavelength probe, Wavelength pump_high, Wavelength pump_stokes,
                            Direction direction);

}  // namespace cars
