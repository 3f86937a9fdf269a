#include "ecf/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ecf/asymptotics.hpp"
#include "ecf/errors.hpp"
#include "ecf/ks.hpp"
#include "ecf/report.hpp"

namespace ecf::cli {
namespace {

using nlohmann::json;

// Raised for problems with the command line itself (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model = "normal:0,1";
  double p = 0.5;
  std::string grid;
  std::string n_list;
  std::size_t replicates = 0;
  std::uint64_t seed = 20120101;
  std::string format;
  std::string output;
  std::string input = "-";
  std::string config;
  bool from_curve = false;
  bool theory_only = false;
  double variance = 0.0;
  bool no_timing = false;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad value '") + tok + "' in " + flag);
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_list(text, "--n")) {
    if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--n entries must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> read_input(const std::string& path, std::istream& in) {
  if (path == "-") return read_values(in);
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return read_values(f);
}

SortedSample load_sample(const std::string& path, std::istream& in) {
  auto values = read_input(path, in);
  if (values.size() < 2) throw ParseError("need at least 2 data values, got " + std::to_string(values.size()));
  return SortedSample(std::move(values));
}

json read_json(const std::string& path, std::istream& in) {
  try {
    if (path == "-") return json::parse(in);
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "'");
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

int env_threads() {
  const char* v = std::getenv("ECF_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long t = std::strtol(v, &end, 10);
  if (*end != '\0' || t < 1) throw UsageError("ECF_THREADS must be a positive integer");
  return static_cast<int>(t);
}

void check_format(const std::string& fmt_name, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (fmt_name == a) return;
  throw UsageError("unsupported --format '" + fmt_name + "' for this command");
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("--p must lie in (0,1)");
}

// Plain output is "key=value" per line.
class Plain {
 public:
  explicit Plain(std::ostream& os) : os_(os) {}
  Plain& operator()(const char* key, double v) {
    os_ << key << '=' << fmt(v) << '\n';
    return *this;
  }
  Plain& operator()(const char* key, std::size_t v) {
    os_ << key << '=' << v << '\n';
    return *this;
  }
  Plain& operator()(const char* key, const std::string& v) {
    os_ << key << '=' << v << '\n';
    return *this;
  }

 private:
  std::ostream& os_;
};

void cmd_theory(const Options& o, std::ostream& out) {
  check_p(o.p);
  const std::string format = o.format.empty() ? "plain" : o.format;
  check_format(format, {"plain", "json", "csv"});
  const auto m = DistributionModel::parse(o.model);

  const double q = m.quantile(o.p);
  const double lo = mu_lower(m, o.p);
  const double up = mu_upper(m, o.p);
  const double g = crossover(m, o.p);
  const double b = split_function(m, o.p);
  const double db = split_derivative(m, o.p);
  const double gp = crossover_derivative(m, o.p);
  const double sigma = sigma_var(m, o.p);
  std::optional<SplitDiagnostics> split;
  try {
    split = find_split_point(m, 0.01, 0.99);
  } catch (const NumericalError&) {
  }

  if (format == "json") {
    json j{{"model", m.spec()}, {"p", o.p},      {"quantile", q}, {"mu_lower", lo},
           {"mu_upper", up},    {"G", g},        {"G_prime", gp}, {"B", b},
           {"B_prime", db},     {"sigma", sigma}};
    if (split) {
      j["split_point"] = split->p0;
      j["split_value"] = split->split_value;
      j["split_roots"] = split->roots;
    }
    out << j.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    out << "model,p,quantile,mu_lower,mu_upper,G,G_prime,B,B_prime,sigma,split_point\n";
    out << m.spec() << ',' << fmt(o.p) << ',' << fmt(q) << ',' << fmt(lo) << ',' << fmt(up) << ','
        << fmt(g) << ',' << fmt(gp) << ',' << fmt(b) << ',' << fmt(db) << ',' << fmt(sigma) << ','
        << (split ? fmt(split->p0) : "") << '\n';
    return;
  }
  Plain pl(out);
  pl("model", m.spec())("p", o.p)("quantile", q)("mu_lower", lo)("mu_upper", up)("G", g)(
      "G_prime", gp)("B", b)("B_prime", db)("sigma", sigma);
  if (split) pl("split_point", split->p0)("split_value", split->split_value);
}

void emit_split(std::size_t n, std::size_t k, double split_value, const std::string& format,
                std::ostream& out) {
  const double p_n = static_cast<double>(k) / static_cast<double>(n);
  if (format == "json") {
    json j{{"n", n}, {"k_star", k}, {"p_n", p_n}, {"split_value", split_value},
           {"left_size", k}, {"right_size", n - k}};
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    out << "n,k_star,p_n,split_value,left_size,right_size\n"
        << n << ',' << k << ',' << fmt(p_n) << ',' << fmt(split_value) << ',' << k << ',' << n - k << '\n';
  } else {
    Plain{out}("n", n)("k_star", k)("p_n", p_n)("split_value", split_value)("left_size", k)(
        "right_size", n - k);
  }
}

void cmd_curve(const Options& o, std::istream& in, std::ostream& out) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  check_format(format, {"csv", "json", "plain"});
  const SortedSample s = load_sample(o.input, in);
  const auto c = ecf_curve(s);
  if (format == "json") {
    auto j = to_json(c);
    j["split_value"] = s.at(c.crossing_k);
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    write_csv(out, c);
  } else {
    for (std::size_t k = 1; k < c.n; ++k) out << k << ' ' << fmt(c.at(k)) << '\n';
    Plain{out}("crossing_k", c.crossing_k)("p_hat", c.p_hat);
  }
}

void cmd_split(const Options& o, std::istream& in, std::ostream& out) {
  const std::string format = o.format.empty() ? "plain" : o.format;
  check_format(format, {"plain", "json", "csv"});
  if (o.from_curve) {
    const json j = read_json(o.input, in);
    const auto c = curve_from_json(j);
    if (!j.contains("split_value") || !j["split_value"].is_number())
      throw ParseError("curve json: missing split_value");
    emit_split(c.n, c.crossing_k, j["split_value"].get<double>(), format, out);
    return;
  }
  const SortedSample s = load_sample(o.input, in);
  const auto split = two_cluster_split(s);
  emit_split(s.size(), split.k_star, split.split_value, format, out);
}

bool given(const CLI::App& sub, const std::string& name) {
  const auto* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

SimConfig build_config(const Options& o, const CLI::App& sub, Experiment experiment,
                       std::size_t default_reps, std::istream& in,
                       std::vector<std::size_t>& sizes) {
  SimConfig cfg;
  cfg.experiment = experiment;
  cfg.replicates = default_reps;
  if (!o.config.empty()) cfg = config_from_json(read_json(o.config, in), &sizes);
  if (given(sub, "--model") || o.config.empty()) cfg.model = DistributionModel::parse(o.model);
  if (given(sub, "--p")) cfg.p = o.p;
  if (given(sub, "--replicates")) cfg.replicates = o.replicates;
  if (given(sub, "--seed")) cfg.seed = o.seed;
  if (given(sub, "--grid")) cfg.grid = parse_list(o.grid, "--grid");
  if (given(sub, "--n")) sizes = parse_sizes(o.n_list);
  if (sizes.empty()) sizes = {cfg.n};
  cfg.n = sizes.front();
  cfg.experiment = experiment;
  if (const int t = env_threads(); t > 0) cfg.threads = cfg.threads > 0 ? std::min(cfg.threads, t) : t;

  try {
    for (std::size_t n : sizes) {
      SimConfig probe = cfg;
      probe.n = n;
      probe.validate();
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void cmd_simulate(const Options& o, const CLI::App& sub, Experiment experiment, std::istream& in,
                  std::ostream& out) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  check_format(format, {"csv", "json", "plain"});
  std::vector<std::size_t> sizes;
  const auto cfg = build_config(o, sub, experiment,
                                experiment == Experiment::ks_normality ? 100 : 1000, in, sizes);
  const auto rows = simulate_table(cfg, sizes);

  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r, !o.no_timing));
    out << arr.dump(2) << '\n';
  } else if (format == "csv") {
    if (experiment == Experiment::ks_normality)
      write_ks_table_csv(out, rows);
    else
      write_tn_table_csv(out, rows);
  } else {
    for (const auto& r : rows) {
      Plain pl(out);
      pl("model", r.model)("p", r.p)("n", r.n)("replicates", r.replicates)("mean", r.mean)(
          "variance", r.variance)("theoretical_sigma", r.theoretical_sigma);
      if (r.ks_pvalue) pl("ks_statistic", *r.ks_statistic)("ks_pvalue", *r.ks_pvalue);
      if (!o.no_timing) pl("wall_time", r.wall_time);
    }
  }
}

void cmd_kstest(const Options& o, const CLI::App& sub, std::istream& in, std::ostream& out) {
  if (!given(sub, "input")) {
    cmd_simulate(o, sub, Experiment::ks_normality, in, out);
    return;
  }
  // Test supplied values against N(0, --variance).
  const std::string format = o.format.empty() ? "plain" : o.format;
  check_format(format, {"plain", "json", "csv"});
  if (!(o.variance > 0.0)) throw UsageError("kstest FILE requires --variance > 0");
  const auto values = read_input(o.input, in);
  if (values.empty()) throw ParseError("no values to test");
  const auto r = ks_test_normal(values, o.variance);
  if (format == "json") {
    out << json{{"m", values.size()}, {"variance", o.variance}, {"ks_statistic", r.statistic},
                {"ks_pvalue", r.pvalue}}.dump(2)
        << '\n';
  } else if (format == "csv") {
    out << "m,variance,ks_statistic,ks_pvalue\n"
        << values.size() << ',' << fmt(o.variance) << ',' << fmt(r.statistic) << ',' << fmt(r.pvalue) << '\n';
  } else {
    Plain{out}("m", values.size())("variance", o.variance)("ks_statistic", r.statistic)("ks_pvalue", r.pvalue);
  }
}

void cmd_covgrid(const Options& o, const CLI::App& sub, std::istream& in, std::ostream& out) {
  const std::string format = o.format.empty() ? "csv" : o.format;
  check_format(format, {"csv", "json"});
  if (o.theory_only) {
    const auto m = DistributionModel::parse(o.model);
    const auto grid = parse_list(o.grid, "--grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw UsageError("--grid levels must lie in (0,1)");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw UsageError("--grid must ascend");
    }
    int threads = env_threads();
    const auto spec = cov_grid_theoretical(m, grid, Execution::parallel, threads);
    if (format == "json")
      out << to_json(spec).dump(2) << '\n';
    else
      write_csv(out, spec);
    return;
  }
  std::vector<std::size_t> sizes;
  auto cfg = build_config(o, sub, Experiment::cov_grid, 2000, in, sizes);
  const auto rep = simulate_cov_grid(cfg);
  if (format == "json") {
    out << to_json(rep, !o.no_timing).dump(2) << '\n';
  } else {
    out << "# theoretical\n";
    write_csv(out, rep.theoretical);
    out << "# empirical\n";
    write_matrix_csv(out, rep.grid, rep.empirical);
    out << "# max_abs_error=" << fmt(rep.max_abs_error) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical cross-over function: theory, data curves, splits and Monte Carlo checks",
               "ecf"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format: json, csv or plain");
    s->add_option("--output", o.output, "Write results to FILE instead of stdout");
  };
  auto add_sim = [&](CLI::App* s) {
    s->add_option("--model", o.model, "Model spec, e.g. normal:0,1, exp:1, uniform:0,1");
    s->add_option("--p", o.p, "Level in (0,1)");
    s->add_option("--n", o.n_list, "Sample size, or a comma list of sizes");
    s->add_option("--replicates", o.replicates, "Monte Carlo replicates");
    s->add_option("--seed", o.seed, "64-bit seed");
    s->add_option("--config", o.config, "JSON config file; flags given explicitly override it");
    s->add_flag("--no-timing", o.no_timing, "Omit wall-clock fields");
    add_format(s);
  };

  auto* theory = app.add_subcommand("theory", "Population quantities of a model at level p");
  theory->add_option("--model", o.model, "Model spec")->required();
  theory->add_option("--p", o.p, "Level in (0,1)");
  add_format(theory);

  auto* curve = app.add_subcommand("curve", "ECF over every bucket of a data file");
  curve->add_option("input", o.input, "Data file, one value per line ('-' for stdin)");
  add_format(curve);

  auto* split = app.add_subcommand("split", "Two-cluster split of a data file at the ECF crossing");
  split->add_option("input", o.input, "Data file or curve JSON ('-' for stdin)");
  split->add_flag("--from-curve", o.from_curve, "Input is the JSON output of 'curve'");
  add_format(split);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo means and variances of T_n");
  add_sim(simulate);

  auto* kstest = app.add_subcommand("kstest", "KS normality test of T_n, or of a data file");
  add_sim(kstest);
  kstest->add_option("input", o.input, "Optional data file tested against N(0, --variance)");
  kstest->add_option("--variance", o.variance, "Null variance when testing a data file");

  auto* covgrid = app.add_subcommand("covgrid", "Covariance of U_n over a grid of levels");
  add_sim(covgrid);
  covgrid->add_option("--grid", o.grid, "Comma list of ascending levels");
  covgrid->add_flag("--theory-only", o.theory_only, "Only compute the theoretical matrix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  std::ostringstream buffer;
  try {
    if (theory->parsed()) cmd_theory(o, buffer);
    else if (curve->parsed()) cmd_curve(o, in, buffer);
    else if (split->parsed()) cmd_split(o, in, buffer);
    else if (simulate->parsed()) cmd_simulate(o, *simulate, Experiment::tn_summary, in, buffer);
    else if (kstest->parsed()) cmd_kstest(o, *kstest, in, buffer);
    else if (covgrid->parsed()) {
      if (!given(*covgrid, "--grid") && o.config.empty()) throw UsageError("covgrid requires --grid");
      cmd_covgrid(o, *covgrid, in, buffer);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (o.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(o.output);
    if (!f) {
      err << "error: cannot write '" << o.output << "'\n";
      return kExitUsage;
    }
    f << buffer.str();
  }
  return kExitOk;
}

}  // namespace ecf::cli
