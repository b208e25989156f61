#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cars {

struct ChainElement {
  std::string name;
  double transmission = 1.0;  // (0, 1]
};

struct DetectorSpec {
  double quantum_efficiency = 0.27;
  double dark_rate_cps = 3.5;
  /// Peak fractional excursion of the dark rate over a run.
  double drift_fraction = 0.03;

  void validate() const;
};

/// Optics between the cell interior and the PMT at 370 nm: three 90 %
/// bandpass filters, the uncoated sapphire exit window (two Fresnel
/// surfaces, n ≈ 1.76) and the dichroic separation stack. Product 0.5696.
std::vector<ChainElement> default_chain();

/// Product of element transmissions. Throws DomainError for an empty list or
/// a transmission outside (0, 1].
double chain_transmission(std::span<const ChainElement> elements);

/// internal_eta × chain transmission × quantum efficiency.
double detection_probability(double internal_eta, std::span<const ChainElement> elements,
                             const DetectorSpec& detector);

enum class TogglePhase { On, Off };
std::string_view to_string(TogglePhase phase);

struct ToggleRecord {
  int cycle = 0;
  TogglePhase phase = TogglePhase::On;
  long long counts = 0;
};

struct ToggleResult {
  double rate_on_cps = 0.0;
  double rate_off_cps = 0.0;
  double difference_cps = 0.0;
  /// difference / standard error of the paired per-cycle differences.
  double significance = 0.0;
  std::vector<ToggleRecord> records;
};

/// Pump-toggle background search. Each cycle counts for `cycle_seconds` with
/// the pumps on (dark + extra rate) and then for `cycle_seconds` with them
/// off. The dark rate follows a random walk bounded to ±drift_fraction,
/// stepped every half-cycle. Deterministic per seed.
ToggleResult simulate_toggle_experiment(const DetectorSpec& detector, double extra_rate_cps,
                                        int n_cycles, double cycle_seconds, std::uint64_t seed);

}  // namespace cars
