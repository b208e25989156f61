#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cars/detection.hpp"
#include "cars/fwm.hpp"
#include "cars/polarization.hpp"
#include "cars/resonance.hpp"

namespace cars::cli {

/// Malformed tabular input. what() carries the source name and line number.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that reads back to the same double; always '.'
/// as decimal point regardless of the process locale.
std::string format_number(double v);

/// Whole-field, locale-independent parse. Rejects NaN, inf and trailing text.
double parse_number(std::string_view field);

/// Numeric CSV: one header row, then rows of numbers. Lines starting with
/// '#' are comments; "# key=value" comments are collected as metadata.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::vector<std::pair<std::string, std::string>> meta;
  std::string source;

  bool has(std::string_view name) const;
  /// Throws CsvError naming the missing column.
  const std::vector<double>& column(std::string_view name) const;
  const std::string* meta_value(std::string_view key) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

Table read_table(std::istream& in, const std::string& source);
Table read_table_file(const std::string& path);

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns,
                 const std::vector<std::pair<std::string, std::string>>& meta = {});

/// Scan CSV: `detuning_MHz,counts,sigma` with pressure/reference metadata.
void write_scan_csv(std::ostream& out, const ScanData& scan);
ScanData read_scan_csv(const std::string& path);
ScanData scan_from_table(const Table& t);

/// Curve CSV: `pressure_bar,eta`.
void write_curve_csv(std::ostream& out, const EfficiencyCurve& curve);

/// Polarization CSV: `theta_deg,rate_ch1,rate_ch2`.
void write_polarization_csv(std::ostream& out, const PolarizationScan& scan);

/// Toggle CSV: `cycle,phase,counts` with phase "on" or "off".
void write_toggle_csv(std::ostream& out, const ToggleResult& result);

/// Writes `content` to `path`, replacing any existing file.
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace cars::cli
