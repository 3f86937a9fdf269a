#include "ecf/report.hpp"

#include <cstdio>
#include <ostream>

#include "ecf/errors.hpp"

namespace ecf {

using nlohmann::json;

std::string fmt(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json to_json(const EcfCurve& c) {
  json j;
  j["n"] = c.n;
  j["crossing_k"] = c.crossing_k;
  j["p_hat"] = c.p_hat;
  j["g"] = c.g;
  return j;
}

EcfCurve curve_from_json(const json& j) {
  try {
    return make_curve(j.at("n").get<std::size_t>(), j.at("g").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("curve json: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("curve json: ") + e.what());
  }
}

json to_json(const CovSpec& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.dim(); ++i) {
    std::vector<double> row(c.matrix.begin() + static_cast<std::ptrdiff_t>(i * c.dim()),
                            c.matrix.begin() + static_cast<std::ptrdiff_t>((i + 1) * c.dim()));
    rows.push_back(row);
  }
  return {{"grid", c.grid}, {"matrix", rows}, {"min_eigenvalue", c.min_eigenvalue}};
}

json to_json(const SimReport& r, bool include_timing) {
  json j{{"model", r.model},
         {"experiment", to_string(r.experiment)},
         {"p", r.p},
         {"n", r.n},
         {"replicates", r.replicates},
         {"seed", r.seed},
         {"crossover", r.crossover},
         {"mean", r.mean},
         {"variance", r.variance},
         {"theoretical_sigma", r.theoretical_sigma},
         {"tn_values", r.tn_values}};
  if (r.ks_statistic) j["ks_statistic"] = *r.ks_statistic;
  if (r.ks_pvalue) j["ks_pvalue"] = *r.ks_pvalue;
  if (include_timing) j["wall_time"] = r.wall_time;
  return j;
}

json to_json(const CovGridReport& r, bool include_timing) {
  CovSpec emp{r.grid, r.empirical, 0.0};
  json e = to_json(emp);
  e.erase("min_eigenvalue");
  json j{{"model", r.model},
         {"n", r.n},
         {"replicates", r.replicates},
         {"seed", r.seed},
         {"grid", r.grid},
         {"empirical", e["matrix"]},
         {"theoretical", to_json(r.theoretical)},
         {"max_abs_error", r.max_abs_error}};
  if (include_timing) j["wall_time"] = r.wall_time;
  return j;
}

void write_matrix_csv(std::ostream& os, const std::vector<double>& grid, const std::vector<double>& m) {
  const std::size_t d = grid.size();
  for (std::size_t i = 0; i < d; ++i) os << (i ? "," : "") << fmt(grid[i]);
  os << '\n';
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) os << (j ? "," : "") << fmt(m[i * d + j]);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const CovSpec& c) { write_matrix_csv(os, c.grid, c.matrix); }

void write_csv(std::ostream& os, const EcfCurve& c) {
  os << "k,p,g\n";
  for (std::size_t k = 1; k < c.n; ++k)
    os << k << ',' << fmt(static_cast<double>(k) / static_cast<double>(c.n)) << ',' << fmt(c.at(k)) << '\n';
  os << "# crossing_k=" << c.crossing_k << " p_hat=" << fmt(c.p_hat) << '\n';
}

void write_tn_table_csv(std::ostream& os, const std::vector<SimReport>& rows) {
  os << "model,p,n,replicates,seed,mean,variance,theoretical_sigma\n";
  for (const auto& r : rows)
    os << r.model << ',' << fmt(r.p) << ',' << r.n << ',' << r.replicates << ',' << r.seed << ','
       << fmt(r.mean) << ',' << fmt(r.variance) << ',' << fmt(r.theoretical_sigma) << '\n';
}

void write_ks_table_csv(std::ostream& os, const std::vector<SimReport>& rows) {
  os << "model,p,n,replicates,seed,theoretical_sigma,ks_statistic,ks_pvalue\n";
  for (const auto& r : rows)
    os << r.model << ',' << fmt(r.p) << ',' << r.n << ',' << r.replicates << ',' << r.seed << ','
       << fmt(r.theoretical_sigma) << ',' << fmt(r.ks_statistic.value_or(0.0)) << ','
       << fmt(r.ks_pvalue.value_or(1.0)) << '\n';
}

SimConfig config_from_json(const json& j, std::vector<std::size_t>* sizes) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  SimConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "model") {
        cfg.model = DistributionModel::parse(value.get<std::string>());
      } else if (key == "p") {
        cfg.p = value.get<double>();
      } else if (key == "n") {
        if (value.is_array()) {
          const auto ns = value.get<std::vector<std::size_t>>();
          if (ns.empty()) throw ParseError("config: n list is empty");
          cfg.n = ns.front();
          if (sizes) *sizes = ns;
        } else {
          cfg.n = value.get<std::size_t>();
          if (sizes) *sizes = {cfg.n};
        }
      } else if (key == "replicates") {
        cfg.replicates = value.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "experiment") {
        cfg.experiment = parse_experiment(value.get<std::string>());
      } else if (key == "grid") {
        cfg.grid = value.get<std::vector<double>>();
      } else if (key == "threads") {
        cfg.threads = value.get<int>();
      } else {
        throw ParseError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (sizes && sizes->empty()) *sizes = {cfg.n};
  return cfg;
}

}  // namespace ecf
