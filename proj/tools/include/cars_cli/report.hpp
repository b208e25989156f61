#pragma once

#include <string>

#include "cars/fit.hpp"
#include "cars_cli/config.hpp"

namespace cars::cli {

/// {model, params: {name: {value, sigma}}, chi2_reduced, converged, ...}
Json fit_report(const FitResult& fit);

/// Adds the resolved configuration and artifact version to a report body.
Json with_provenance(Json body, const RunConfig& rc);

/// Two-space indented JSON plus trailing newline.
std::string dump(const Json& j);

enum class PlotKind { Curve, Scan, Polarization };

/// gnuplot companion for a CSV written by this tool. `csv_name` is taken
/// relative to the script's own directory.
std::string gnuplot_script(PlotKind kind, const std::string& csv_name);

/// `path` with its extension replaced by `.gp`.
std::string companion_script_path(const std::string& csv_path);

}  // namespace cars::cli
