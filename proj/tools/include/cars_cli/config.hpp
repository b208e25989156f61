#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cars/detection.hpp"
#include "cars/dispersion.hpp"
#include "cars/fwm.hpp"
#include "cars/polarization.hpp"
#include "cars/resonance.hpp"

namespace cars::cli {

using Json = nlohmann::ordered_json;

/// Invalid or unparsable configuration. what() starts with the JSON pointer
/// of the offending value when one is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BeamConfig {
  double wavelength_nm = 0.0;
  double waist_um = 70.0;
  double focus_mm = 0.0;
  double power_w = 1.0;
  double pol_deg = 45.0;
};

struct CalibrationConfig {
  double eta = 0.0;
  double at_bar = 0.0;
};

/// Fully resolved run configuration. `resolved` is the merged document
/// (defaults overlaid with the user's file) and is embedded in every report.
struct RunConfig {
  Json resolved;

  DispersionModel::Coefficients coefficients;
  double temperature_k = 293.15;
  double cell_length_m = 0.140;
  /// pump_high, pump_stokes, probe.
  std::array<BeamConfig, 3> beams;
  Direction direction = Direction::Upconversion;
  ResonanceParams resonance;
  double detuning_mhz = 0.0;
  std::vector<ChainElement> elements;
  DetectorSpec detector;
  DetectionParams polarization;
  std::optional<double> signal_waist_um;
  int density_exponent = 1;
  bool literal_conjugation = false;
  std::optional<CalibrationConfig> calibration;
  std::uint64_t seed = 1;
};

/// The default document. Every key a user file may contain appears here.
Json default_config_json();

/// Merges `user` over the defaults. Unknown keys, wrong types and
/// out-of-range values throw ConfigError naming the JSON pointer.
RunConfig resolve_config(const Json& user);

/// Reads and resolves a JSON file; parse errors carry line and column.
RunConfig load_config(const std::string& path);

/// Defaults only.
RunConfig default_run_config();

/// Engine configuration assembled from the run configuration, calibrated
/// when a calibration section is present.
ConversionConfig conversion_config(const RunConfig& rc);

}  // namespace cars::cli
