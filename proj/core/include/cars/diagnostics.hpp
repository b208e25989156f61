#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cars {

/// Input outside the physical domain of an operation (negative wavelength,
/// dispersion pole, unphysical density, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to converge or hit its evaluation budget.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

using WarningHandler = std::function<void(std::string_view)>;

// Non-fatal notices (extrapolated wavelength range, non-45° pumps). The
// default handler writes to stderr; returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace cars
