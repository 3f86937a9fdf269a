#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecf/asymptotics.hpp"
#include "ecf/ecf.hpp"
#include "ecf/simlab.hpp"

namespace ecf {

/// Fixed text form for CSV and plain output: '.' decimal, no grouping,
/// 9 significant digits.
std::string fmt(double v);

nlohmann::json to_json(const EcfCurve& c);
nlohmann::json to_json(const CovSpec& c);
nlohmann::json to_json(const SimReport& r, bool include_timing = true);
nlohmann::json to_json(const CovGridReport& r, bool include_timing = true);

/// Rebuilds a curve from to_json output (fields n and g). Throws ParseError.
EcfCurve curve_from_json(const nlohmann::json& j);

/// Row-major CSV: header of grid points, then one row per grid point.
void write_csv(std::ostream& os, const CovSpec& c);
/// Same layout for a raw matrix over `grid`.
void write_matrix_csv(std::ostream& os, const std::vector<double>& grid, const std::vector<double>& m);
/// k,p,g rows followed by a "# crossing_k=..." comment line.
void write_csv(std::ostream& os, const EcfCurve& c);

/// Means and variances keyed by n (one row per report).
void write_tn_table_csv(std::ostream& os, const std::vector<SimReport>& rows);
/// KS statistics and p-values keyed by n.
void write_ks_table_csv(std::ostream& os, const std::vector<SimReport>& rows);

/// Reads a simulation config. Recognised keys: model, p, n (a number),
/// replicates, seed, experiment, grid, threads. Unknown keys are rejected.
/// Returns the list of sample sizes when "n" is an array.
SimConfig config_from_json(const nlohmann::json& j, std::vector<std::size_t>* sizes = nullptr);

}  // namespace ecf
