#include "cars_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cars/detection.hpp"
#include "cars/diagnostics.hpp"
#include "cars/dispersion.hpp"
#include "cars/fit.hpp"
#include "cars/fwm.hpp"
#include "cars/polarization.hpp"
#include "cars/resonance.hpp"
#include "cars/version.hpp"
#include "cars_cli/config.hpp"
#include "cars_cli/csv.hpp"
#include "cars_cli/report.hpp"

namespace cars::cli {
namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string report_path;

  // dispersion
  double wavelength_nm = 0.0;
  double pressure_bar = 0.0;
  std::optional<double> temperature_k;

  // grids
  double pmax_bar = 16.0;
  int steps = 160;
  unsigned threads = 1;

  // scans
  std::string noise = "none";
  std::optional<std::uint64_t> seed;
  int points = 100;
  double span_fwhm = 3.0;
  double peak_counts = 400.0;
  std::vector<double> pressures_bar{4.0, 8.0, 12.0, 16.0};
  std::string out_dir;

  // fit
  std::string model;
  std::string input_path;
  std::string column = "rate_ch1";

  // polarization
  double theta_step_deg = 10.0;
  double theta_max_deg = 360.0;
  double pol_peak_counts = 1000.0;

  // toggle
  int cycles = 100;
  double seconds = 10.0;
  double extra_cps = 0.0;

  // optimize
  std::string param = "pressure";
  double lo_bar = 0.1;
  double hi_bar = 16.0;
};

class WarningRedirect {
 public:
  explicit WarningRedirect(std::ostream& err)
      : previous_(set_warning_handler([&err](std::string_view m) {
          err << "warning: " << m << '\n';
        })) {}
  ~WarningRedirect() { set_warning_handler(previous_); }
  WarningRedirect(const WarningRedirect&) = delete;
  WarningRedirect& operator=(const WarningRedirect&) = delete;

 private:
  WarningHandler previous_;
};

RunConfig resolve(const Options& o) {
  return o.config_path.empty() ? default_run_config() : load_config(o.config_path);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    write_file(path, content);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

NoiseModel noise_model(const std::string& s) {
  return s == "poisson" ? NoiseModel::Poisson : NoiseModel::None;
}

std::uint64_t seed_of(const Options& o, const RunConfig& rc) { return o.seed.value_or(rc.seed); }

ScanData resonance_scan(const RunConfig& rc, double p_bar, const Options& o, std::uint64_t seed) {
  const Pressure p(p_bar);
  const double gamma = fwhm(rc.resonance, p);
  if (!(gamma > 0.0)) throw DomainError("line width is zero at this pressure; scan undefined");
  const double center = rc.resonance.shift_mhz_per_bar * p_bar;
  const auto grid = linspace(center - o.span_fwhm * gamma, center + o.span_fwhm * gamma, o.points);
  return synthesize_scan(rc.resonance, p, grid, o.peak_counts, noise_model(o.noise), seed,
                         rc.resonance.nu0);
}

int cmd_dispersion(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const DispersionModel model(rc.coefficients);
  const GasState state(Pressure(o.pressure_bar), Temperature(o.temperature_k.value_or(rc.temperature_k)));
  const Wavelength lambda(o.wavelength_nm);
  const double n = refractive_index(lambda, state, model);
  const double k = wavevector(lambda, state, model);
  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_table(csv, {"wavelength_nm", "pressure_bar", "temperature_K", "n", "k_per_m"},
                {{o.wavelength_nm}, {o.pressure_bar}, {state.temperature().value()}, {n}, {k}});
    write_file(o.out_path, csv.str());
  }
  Json body = {{"wavelength_nm", o.wavelength_nm},
               {"pressure_bar", o.pressure_bar},
               {"temperature_K", state.temperature().value()},
               {"number_density_per_m3", state.number_density()},
               {"refractivity", refractivity(lambda, state, model)},
               {"n", n},
               {"k_per_m", k}};
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

int cmd_mismatch(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const auto cfg = conversion_config(rc);
  const auto grid = linspace(0.0, o.pmax_bar, o.steps + 1);
  std::vector<double> dk;
  dk.reserve(grid.size());
  for (double p : grid)
    dk.push_back(phase_mismatch(cfg.quadruple, GasState(Pressure(p), cfg.temperature),
                                cfg.dispersion));
  std::ostringstream csv;
  write_table(csv, {"pressure_bar", "delta_k_per_m"}, {grid, dk},
              {{"direction", std::string(to_string(rc.direction))},
               {"signal_nm", format_number(cfg.quadruple.wavelength(Field::Signal).value())}});
  emit(o.out_path, csv.str(), out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const auto cfg = conversion_config(rc);
  const auto grid = linspace(0.0, o.pmax_bar, o.steps + 1);
  const auto curve = pressure_sweep(cfg, grid, SweepOptions{o.threads});
  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    write_file(o.out_path, csv.str());
    write_file(companion_script_path(o.out_path),
               gnuplot_script(PlotKind::Curve,
                              std::filesystem::path(o.out_path).filename().string()));
  }
  Json body = {{"command", "sweep-pressure"},
               {"direction", std::string(to_string(rc.direction))},
               {"optimum_pressure_bar", curve.optimum_pressure_bar},
               {"fwhm_bar", curve.fwhm_bar},
               {"peak_eta", curve.peak_eta},
               {"normalized", curve.normalized},
               {"optimum_at_boundary", curve.optimum_at_boundary},
               {"fwhm_resolved", curve.fwhm_resolved}};
  if (o.out_path.empty()) {
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    body["curve_csv"] = csv.str();
  }
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const auto scan = resonance_scan(rc, o.pressure_bar, o, seed_of(o, rc));
  std::ostringstream csv;
  write_scan_csv(csv, scan);
  emit(o.out_path, csv.str(), out);
  if (!o.out_path.empty())
    write_file(companion_script_path(o.out_path),
               gnuplot_script(PlotKind::Scan,
                              std::filesystem::path(o.out_path).filename().string()));
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const auto table = read_table_file(o.input_path);
  FitResult fit;
  Json extra = Json::object();
  if (o.model == "lorentzian") {
    const auto scan = scan_from_table(table);
    fit = fit_lorentzian(scan);
    extra["reference_THz"] = scan.meta.reference_thz;
    if (fit.converged && scan.meta.reference_thz > 0.0)
      extra["center_THz"] = scan.meta.reference_thz + fit.value("center") * 1e-6;
  } else if (o.model == "line") {
    const auto& x = table.column("x");
    const auto& y = table.column("y");
    fit = table.has("sigma") ? fit_line(x, y, table.column("sigma")) : fit_line(x, y);
  } else {
    const auto& theta = table.column("theta_deg");
    const auto& rates = table.column(o.column);
    fit = fit_malus(theta, rates);
    extra["column"] = o.column;
  }
  Json body = fit_report(fit);
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
  body["input"] = o.input_path;
  emit(o.out_path, dump(with_provenance(std::move(body), rc)), out);
  return fit.converged ? kExitOk : kExitNumerical;
}

int cmd_pressure_series(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  if (o.pressures_bar.size() < 2) throw DomainError("pressure series needs at least 2 pressures");
  const std::uint64_t seed = seed_of(o, rc);
  std::vector<PressurePoint> series;
  Json points = Json::array();
  bool all_converged = true;
  for (std::size_t i = 0; i < o.pressures_bar.size(); ++i) {
    const double p = o.pressures_bar[i];
    const auto scan = resonance_scan(rc, p, o, seed + i);
    if (!o.out_dir.empty()) {
      std::filesystem::create_directories(o.out_dir);
      std::ostringstream csv;
      write_scan_csv(csv, scan);
      write_file((std::filesystem::path(o.out_dir) / ("scan_" + std::to_string(i) + ".csv")).string(),
                 csv.str());
    }
    const auto fit = fit_lorentzian(scan);
    all_converged = all_converged && fit.converged;
    points.push_back({{"pressure_bar", p},
                      {"converged", fit.converged},
                      {"center_MHz", fit.value("center")},
                      {"center_sigma_MHz", fit.sigma("center")},
                      {"fwhm_MHz", fit.value("fwhm")},
                      {"fwhm_sigma_MHz", fit.sigma("fwhm")},
                      {"chi2_reduced", fit.chi2_reduced}});
    series.push_back({p, fit, rc.resonance.nu0.value()});
  }
  Json body = {{"command", "pressure-series"}, {"noise", o.noise}, {"seed", seed}, {"points", points}};
  if (!all_converged) {
    body["error"] = "at least one Lorentzian fit did not converge";
    emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
    return kExitNumerical;
  }
  const auto zp = zero_pressure_extrapolation(series);
  std::vector<double> widths, width_sigma;
  for (const auto& s : series) {
    widths.push_back(s.fit.value("fwhm"));
    width_sigma.push_back(s.fit.sigma("fwhm"));
  }
  const bool weighted =
      std::all_of(width_sigma.begin(), width_sigma.end(), [](double s) { return s > 0.0; });
  const auto broadening = weighted ? fit_line(o.pressures_bar, widths, width_sigma)
                                   : fit_line(o.pressures_bar, widths);
  body["nu0_THz"] = zp.nu0_thz;
  body["nu0_sigma_MHz"] = zp.nu0_sigma_mhz;
  body["shift_MHz_per_bar"] = zp.slope_mhz_per_bar;
  body["shift_sigma_MHz_per_bar"] = zp.slope_sigma_mhz_per_bar;
  body["broadening_MHz_per_bar"] = broadening.value("slope");
  body["broadening_sigma_MHz_per_bar"] = broadening.sigma("slope");
  body["stability_bound"] =
      broadening.value("slope") / std::abs(zp.slope_mhz_per_bar);
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

double fold_phase_difference(double d) {
  double r = std::fmod(d, 180.0);
  if (r < 0.0) r += 180.0;
  return r;
}

int cmd_polarization(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  if (!(o.theta_step_deg > 0.0)) throw DomainError("theta step must be positive");
  std::vector<double> theta;
  for (int i = 0;; ++i) {
    const double t = i * o.theta_step_deg;
    if (t > o.theta_max_deg + 1e-9) break;
    theta.push_back(t);
  }
  PolarizationNoise noise;
  noise.poisson = o.noise == "poisson";
  noise.peak_counts = o.pol_peak_counts;
  noise.seed = seed_of(o, rc);
  const auto scan = polarization_scan(theta, rc.polarization, noise, rc.beams[0].pol_deg);
  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_polarization_csv(csv, scan);
    write_file(o.out_path, csv.str());
    write_file(companion_script_path(o.out_path),
               gnuplot_script(PlotKind::Polarization,
                              std::filesystem::path(o.out_path).filename().string()));
  }
  auto sigmas = [&](const std::vector<double>& y) {
    std::vector<double> s;
    if (noise.poisson)
      for (double v : y) s.push_back(std::sqrt(std::max(v, 1.0)));
    return s;
  };
  const auto f1 = fit_malus(scan.theta_deg, scan.ch1, sigmas(scan.ch1));
  const auto f2 = fit_malus(scan.theta_deg, scan.ch2, sigmas(scan.ch2));
  Json body = {{"command", "polarization-scan"},
               {"fidelity", fidelity(rc.polarization)},
               {"ch1", fit_report(f1)},
               {"ch2", fit_report(f2)},
               {"phase_difference_deg",
                fold_phase_difference(f2.value("phase") - f1.value("phase"))}};
  if (o.out_path.empty()) {
    std::ostringstream csv;
    write_polarization_csv(csv, scan);
    body["scan_csv"] = csv.str();
  }
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

int cmd_toggle(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const std::uint64_t seed = seed_of(o, rc);
  const auto r = simulate_toggle_experiment(rc.detector, o.extra_cps, o.cycles, o.seconds, seed);
  if (!o.out_path.empty()) {
    std::ostringstream csv;
    write_toggle_csv(csv, r);
    write_file(o.out_path, csv.str());
  }
  Json body = {{"command", "toggle"},
               {"cycles", o.cycles},
               {"seconds_per_half_cycle", o.seconds},
               {"extra_cps", o.extra_cps},
               {"seed", seed},
               {"rate_on_cps", r.rate_on_cps},
               {"rate_off_cps", r.rate_off_cps},
               {"difference_cps", r.difference_cps},
               {"significance", r.significance}};
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const auto rc = resolve(o);
  const auto cfg = conversion_config(rc);
  Pressure best(0.0);
  try {
    best = optimize_pressure(cfg, Pressure(o.lo_bar), Pressure(o.hi_bar));
  } catch (const DomainError& e) {
    throw NumericalError(e.what(), "bounds [" + format_number(o.lo_bar) + ", " +
                                       format_number(o.hi_bar) + "] bar");
  }
  Json body = {{"command", "optimize"},
               {"param", o.param},
               {"optimum_pressure_bar", best.value()},
               {"eta_rel", relative_efficiency(cfg, best)}};
  if (cfg.calibration) {
    const double eta = absolute_efficiency(cfg, best);
    body["eta_internal"] = eta;
    body["chain_transmission"] = chain_transmission(rc.elements);
    body["detection_probability"] = detection_probability(eta, rc.elements, rc.detector);
  }
  emit(o.report_path, dump(with_provenance(std::move(body), rc)), out);
  return kExitOk;
}

void add_config(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration (defaults if omitted)")
      ->check(CLI::ExistingFile);
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Random seed (default: config seed)");
}

void add_noise(CLI::App* sub, Options& o) {
  sub->add_option("--noise", o.noise, "Noise model: none | poisson")
      ->check(CLI::IsMember({"none", "poisson"}));
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Frequency conversion by coherent Raman scattering in hydrogen", "cars"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto* disp = app.add_subcommand("dispersion", "Refractive index and wavevector of the gas");
  disp->add_option("--wavelength-nm", o.wavelength_nm, "Vacuum wavelength (nm)")->required();
  disp->add_option("--pressure-bar", o.pressure_bar, "Gas pressure (bar)")->required();
  disp->add_option("--temperature-K", o.temperature_k, "Gas temperature (K, default: config)");
  disp->add_option("--out", o.out_path, "Also write a one-row CSV here");
  disp->add_option("--report", o.report_path, "Write the JSON report here instead of stdout");
  add_config(disp, o);

  auto* mis = app.add_subcommand("mismatch", "Phase mismatch Δk (1/m) against pressure");
  add_config(mis, o);
  mis->add_option("--pmax-bar", o.pmax_bar, "Upper pressure (bar)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  mis->add_option("--steps", o.steps, "Number of pressure intervals")->capture_default_str()
      ->check(CLI::Range(1, 1000000));
  mis->add_option("--out", o.out_path, "CSV path (stdout if omitted)");

  auto* sweep = app.add_subcommand("sweep-pressure", "Conversion efficiency against pressure");
  add_config(sweep, o);
  sweep->add_option("--pmax-bar", o.pmax_bar, "Upper pressure (bar)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--steps", o.steps, "Number of pressure intervals")->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  sweep->add_option("--threads", o.threads, "Worker threads for the grid")->capture_default_str()
      ->check(CLI::Range(1u, 256u));
  sweep->add_option("--out", o.out_path, "Curve CSV path (pressure_bar, eta) plus .gp script");
  sweep->add_option("--report", o.report_path, "Summary JSON path (stdout if omitted)");

  auto* scan = app.add_subcommand("scan-resonance", "Synthetic Raman resonance scan");
  add_config(scan, o);
  scan->add_option("--pressure-bar", o.pressure_bar, "Gas pressure (bar)")->required()
      ->check(CLI::PositiveNumber);
  add_noise(scan, o);
  add_seed(scan, o);
  scan->add_option("--points", o.points, "Number of detuning points")->capture_default_str()
      ->check(CLI::Range(5, 1000000));
  scan->add_option("--span-fwhm", o.span_fwhm, "Half-span of the scan in line widths")->capture_default_str()
      ->check(CLI::PositiveNumber);
  scan->add_option("--peak-counts", o.peak_counts, "Expected counts at line centre")->capture_default_str()
      ->check(CLI::PositiveNumber);
  scan->add_option("--out", o.out_path, "Scan CSV path (detuning_MHz, counts, sigma)");

  auto* fit = app.add_subcommand("fit", "Fit a model to CSV data and emit a JSON report");
  fit->add_option("model", o.model, "lorentzian | line | malus")->required()
      ->check(CLI::IsMember({"lorentzian", "line", "malus"}));
  fit->add_option("--input", o.input_path,
                  "CSV: detuning_MHz,counts[,sigma] | x,y[,sigma] | theta_deg,<column>")
      ->required()->check(CLI::ExistingFile);
  fit->add_option("--column", o.column, "Rate column for malus fits")->capture_default_str();
  fit->add_option("--out", o.out_path, "Report JSON path (stdout if omitted)");
  add_config(fit, o);

  auto* series = app.add_subcommand(
      "pressure-series", "Scans at several pressures, Lorentzian fits, zero-pressure extrapolation");
  add_config(series, o);
  series->add_option("--pressures-bar,--pressures", o.pressures_bar,
                     "Comma-separated pressures (bar)")->capture_default_str()
      ->delimiter(',')->check(CLI::PositiveNumber);
  add_noise(series, o);
  add_seed(series, o);
  series->add_option("--points", o.points, "Detuning points per scan")->capture_default_str()
      ->check(CLI::Range(5, 1000000));
  series->add_option("--span-fwhm", o.span_fwhm, "Half-span of each scan in line widths")->capture_default_str()
      ->check(CLI::PositiveNumber);
  series->add_option("--peak-counts", o.peak_counts, "Expected counts at line centre")->capture_default_str()
      ->check(CLI::PositiveNumber);
  series->add_option("--out-dir", o.out_dir, "Directory for the per-pressure scan CSVs");
  series->add_option("--report", o.report_path, "Report JSON path (stdout if omitted)");

  auto* pol = app.add_subcommand("polarization-scan", "Two-channel polarization analysis");
  add_config(pol, o);
  pol->add_option("--theta-step-deg,--theta-step", o.theta_step_deg,
                  "Probe polarization step (deg)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  pol->add_option("--theta-max-deg", o.theta_max_deg, "Last probe angle (deg)")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_noise(pol, o);
  add_seed(pol, o);
  pol->add_option("--peak-counts", o.pol_peak_counts, "Counts for a fully transmitted input")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pol->add_option("--out", o.out_path, "CSV path (theta_deg, rate_ch1, rate_ch2) plus .gp");
  pol->add_option("--report", o.report_path, "Report JSON path (stdout if omitted)");

  auto* tog = app.add_subcommand("toggle", "Pump on/off background search");
  add_config(tog, o);
  tog->add_option("--cycles", o.cycles, "Number of on/off cycles")->capture_default_str()
      ->check(CLI::Range(2, 100000000));
  tog->add_option("--seconds", o.seconds, "Counting time per half-cycle (s)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  tog->add_option("--extra-cps", o.extra_cps, "Pump-induced extra count rate (counts/s)")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_seed(tog, o);
  tog->add_option("--out", o.out_path, "CSV path (cycle, phase, counts)");
  tog->add_option("--report", o.report_path, "Report JSON path (stdout if omitted)");

  auto* opt = app.add_subcommand("optimize", "Optimum operating point");
  add_config(opt, o);
  opt->add_option("--param", o.param, "Parameter to optimize")->capture_default_str()
      ->check(CLI::IsMember({"pressure"}));
  opt->add_option("--lo-bar", o.lo_bar, "Lower pressure bound (bar)")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  opt->add_option("--hi-bar", o.hi_bar, "Upper pressure bound (bar)")->capture_default_str()
      ->check(CLI::PositiveNumber);
  opt->add_option("--report", o.report_path, "Report JSON path (stdout if omitted)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("cars");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  WarningRedirect redirect(err);
  try {
    if (*disp) return cmd_dispersion(o, out);
    if (*mis) return cmd_mismatch(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*scan) return cmd_scan(o, out);
    if (*fit) return cmd_fit(o, out);
    if (*series) return cmd_pressure_series(o, out);
    if (*pol) return cmd_polarization(o, out);
    if (*tog) return cmd_toggle(o, out);
    if (*opt) return cmd_optimize(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CsvError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    if (!e.diagnostics().empty()) err << "  " << e.diagnostics() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cars::cli
