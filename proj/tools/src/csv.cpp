#include "cars_cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cars::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view field) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end)
    throw CsvError("not a number: '" + std::string(field) + "'");
  if (!std::isfinite(v)) throw CsvError("non-finite value: '" + std::string(field) + "'");
  return v;
}

bool Table::has(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

const std::vector<double>& Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw CsvError(source + ": missing column '" + std::string(name) + "'");
  return columns[static_cast<std::size_t>(it - header.begin())];
}

const std::string* Table::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

Table read_table(std::istream& in, const std::string& source) {
  Table t;
  t.source = source;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto body = trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos)
        t.meta.emplace_back(std::string(trim(body.substr(0, eq))),
                            std::string(trim(body.substr(eq + 1))));
      continue;
    }
    const auto fields = split(text);
    if (!have_header) {
      for (auto f : fields) {
        if (f.empty()) throw CsvError(where(source, lineno) + "empty column name in header");
        t.header.emplace_back(f);
      }
      t.columns.resize(t.header.size());
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw CsvError(where(source, lineno) + "expected " + std::to_string(t.header.size()) +
                     " fields, got " + std::to_string(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      try {
        t.columns[i].push_back(parse_number(fields[i]));
      } catch (const CsvError& e) {
        throw CsvError(where(source, lineno) + "column '" + t.header[i] + "': " + e.what());
      }
    }
  }
  if (!have_header) throw CsvError(source + ": no header row");
  return t;
}

Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open input file");
  return read_table(in, path);
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns,
                 const std::vector<std::pair<std::string, std::string>>& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << (c ? "," : "") << format_number(columns[c][r]);
    out << '\n';
  }
}

void write_scan_csv(std::ostream& out, const ScanData& scan) {
  scan.validate();
  std::vector<double> sigma = scan.sigma;
  if (sigma.empty())
    for (double y : scan.y) sigma.push_back(std::sqrt(std::max(y, 1.0)));
  write_table(out, {"detuning_MHz", "counts", "sigma"}, {scan.x, scan.y, sigma},
              {{"pressure_bar", format_number(scan.meta.pressure_bar)},
               {"reference_THz", format_number(scan.meta.reference_thz)},
               {"duration_s", format_number(scan.meta.duration_s)},
               {"seed", std::to_string(scan.meta.seed)}});
}

ScanData scan_from_table(const Table& t) {
  ScanData s;
  s.x = t.column("detuning_MHz");
  s.y = t.column("counts");
  if (t.has("sigma")) s.sigma = t.column("sigma");
  auto meta = [&](std::string_view key, double fallback) {
    const auto* v = t.meta_value(key);
    if (!v) return fallback;
    try {
      return parse_number(*v);
    } catch (const CsvError& e) {
      throw CsvError(t.source + ": metadata '" + std::string(key) + "': " + e.what());
    }
  };
  s.meta.pressure_bar = meta("pressure_bar", 0.0);
  s.meta.reference_thz = meta("reference_THz", 0.0);
  s.meta.duration_s = meta("duration_s", 1.0);
  s.meta.seed = static_cast<std::uint64_t>(meta("seed", 0.0));
  for (double v : s.sigma)
    if (!(v > 0.0)) throw CsvError(t.source + ": column 'sigma' must be positive");
  return s;
}

ScanData read_scan_csv(const std::string& path) { return scan_from_table(read_table_file(path)); }

void write_curve_csv(std::ostream& out, const EfficiencyCurve& curve) {
  write_table(out, {"pressure_bar", "eta"}, {curve.pressures_bar, curve.eta});
}

void write_polarization_csv(std::ostream& out, const PolarizationScan& scan) {
  write_table(out, {"theta_deg", "rate_ch1", "rate_ch2"}, {scan.theta_deg, scan.ch1, scan.ch2});
}

void write_toggle_csv(std::ostream& out, const ToggleResult& result) {
  out << "cycle,phase,counts\n";
  for (const auto& r : result.records)
    out << r.cycle << ',' << to_string(r.phase) << ',' << r.counts << '\n';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error(path + ": write failed");
}

}  // namespace cars::cli
