#include "cars_cli/report.hpp"

#include <filesystem>
#include <sstream>

#include "cars/version.hpp"

namespace cars::cli {

Json fit_report(const FitResult& fit) {
  Json params = Json::object();
  for (const auto& p : fit.params) params[p.name] = {{"value", p.value}, {"sigma", p.sigma}};
  Json j = {{"model", fit.model},
            {"params", params},
            {"chi2_reduced", fit.chi2_reduced},
            {"converged", fit.converged},
            {"n_iterations", fit.n_iterations}};
  if (!fit.diagnostics.empty()) j["diagnostics"] = fit.diagnostics;
  return j;
}

Json with_provenance(Json body, const RunConfig& rc) {
  body["config"] = rc.resolved;
  body["version"] = kVersion;
  return body;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string gnuplot_script(PlotKind kind, const std::string& csv_name) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set grid\n";
  const std::string file = "'" + csv_name + "'";
  switch (kind) {
    case PlotKind::Curve:
      gp << "set xlabel 'H2 pressure (bar)'\n"
         << "set ylabel 'conversion efficiency'\n"
         << "plot " << file << " using 1:2 with lines lw 2\n";
      break;
    case PlotKind::Scan:
      gp << "set xlabel 'detuning (MHz)'\n"
         << "set ylabel 'counts'\n"
         << "plot " << file << " using 1:2:3 with yerrorbars pt 7\n";
      break;
    case PlotKind::Polarization:
      gp << "set xlabel 'probe polarization (deg)'\n"
         << "set ylabel 'rate'\n"
         << "plot " << file << " using 1:2 with linespoints, \\\n"
         << "     " << file << " using 1:3 with linespoints\n";
      break;
  }
  gp << "pause mouse close\n";
  return gp.str();
}

std::string companion_script_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".gp").string();
}

}  // namespace cars::cli
