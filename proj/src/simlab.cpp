#include "ecf/simlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ecf/ecf.hpp"
#include "ecf/errors.hpp"
#include "ecf/ks.hpp"
#include "ecf/philox.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ecf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body(r) for r in [0, count); each r must write only its own outputs.
template <class Body>
void for_each_replicate(std::size_t count, Execution exec, int threads, Body&& body) {
  const auto total = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t r = 0; r < total; ++r) body(static_cast<std::size_t>(r));
    return;
  }
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
  for (std::ptrdiff_t r = 0; r < total; ++r) body(static_cast<std::size_t>(r));
  (void)threads;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::tn_summary: return "tn_summary";
    case Experiment::ks_normality: return "ks_normality";
    case Experiment::cov_grid: return "cov_grid";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  if (name == "tn_summary") return Experiment::tn_summary;
  if (name == "ks_normality") return Experiment::ks_normality;
  if (name == "cov_grid") return Experiment::cov_grid;
  throw ParseError("unknown experiment '" + name + "'");
}

void SimConfig::validate() const {
  if (n < 10) throw DomainError("config: n must be at least 10");
  if (replicates < 10) throw DomainError("config: replicates must be at least 10");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("config: p must lie in (0,1)");
  if (experiment == Experiment::cov_grid) {
    if (grid.empty()) throw DomainError("config: cov_grid needs a grid");
    if (replicates < 100) throw DomainError("config: cov_grid needs at least 100 replicates");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.05 && grid[i] <= 0.95))
        throw DomainError("config: grid levels must lie in [0.05, 0.95]");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("config: grid must ascend");
    }
  }
}

std::vector<double> draw_iid(const DistributionModel& m, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream) {
  if (n < 1) throw DomainError("draw_iid: n must be at least 1");
  UniformStream u(seed, stream);
  std::vector<double> out(n);
  for (auto& w : out) w = m.quantile(u.next());
  std::sort(out.begin(), out.end());
  return out;
}

SortedSample sample_iid(const DistributionModel& m, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream) {
  return SortedSample(draw_iid(m, n, seed, stream), true);
}

SimReport simulate_tn(const SimConfig& cfg, Execution exec) {
  cfg.validate();
  const auto t0 = Clock::now();

  SimReport rep;
  rep.model = cfg.model.spec();
  rep.experiment = cfg.experiment;
  rep.p = cfg.p;
  rep.n = cfg.n;
  rep.replicates = cfg.replicates;
  rep.seed = cfg.seed;
  rep.crossover = crossover(cfg.model, cfg.p);
  rep.theoretical_sigma = sigma_var(cfg.model, cfg.p);

  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  rep.tn_values.assign(cfg.replicates, 0.0);
  for_each_replicate(cfg.replicates, exec, cfg.threads, [&](std::size_t r) {
    const auto s = sample_iid(cfg.model, cfg.n, cfg.seed, r);
    rep.tn_values[r] = root_n * (ecf_eval(s, cfg.p) - rep.crossover);
  });

  rep.mean = mean_of(rep.tn_values);
  rep.variance = variance_of(rep.tn_values, rep.mean);
  if (cfg.experiment == Experiment::ks_normality) {
    const auto ks = ks_test_normal(rep.tn_values, rep.theoretical_sigma);
    rep.ks_statistic = ks.statistic;
    rep.ks_pvalue = ks.pvalue;
  }
  rep.wall_time = seconds_since(t0);
  return rep;
}

std::vector<SimReport> simulate_table(SimConfig cfg, const std::vector<std::size_t>& sizes,
                                      Execution exec) {
  std::vector<SimReport> out;
  for (std::size_t n : sizes) {
    cfg.n = n;
    out.push_back(simulate_tn(cfg, exec));
  }
  return out;
}

CovGridReport simulate_cov_grid(const SimConfig& cfg, Execution exec) {
  SimConfig checked = cfg;
  checked.experiment = Experiment::cov_grid;
  checked.validate();
  const auto t0 = Clock::now();

  const std::size_t d = cfg.grid.size();
  const std::size_t reps = cfg.replicates;
  std::vector<double> centre(d);
  for (std::size_t i = 0; i < d; ++i) centre[i] = crossover(cfg.model, cfg.grid[i]);

  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  std::vector<double> u(reps * d);  // row r holds U_n over the grid for replicate r
  for_each_replicate(reps, exec, cfg.threads, [&](std::size_t r) {
    const auto s = sample_iid(cfg.model, cfg.n, cfg.seed, r);
    for (std::size_t i = 0; i < d; ++i) u[r * d + i] = root_n * (ecf_eval(s, cfg.grid[i]) - centre[i]);
  });

  CovGridReport rep;
  rep.model = cfg.model.spec();
  rep.n = cfg.n;
  rep.replicates = reps;
  rep.seed = cfg.seed;
  rep.grid = cfg.grid;

  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t i = 0; i < d; ++i) mean[i] += u[r * d + i];
  for (auto& m : mean) m /= static_cast<double>(reps);

  rep.empirical.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < reps; ++r) s += (u[r * d + i] - mean[i]) * (u[r * d + j] - mean[j]);
      s /= static_cast<double>(reps - 1);
      rep.empirical[i * d + j] = s;
      rep.empirical[j * d + i] = s;
    }
  }

  rep.theoretical = cov_grid_theoretical(cfg.model, cfg.grid, exec, cfg.threads);
  for (std::size_t k = 0; k < d * d; ++k)
    rep.max_abs_error = std::max(rep.max_abs_error, std::abs(rep.empirical[k] - rep.theoretical.matrix[k]));
  rep.wall_time = seconds_since(t0);
  return rep;
}

}  // namespace ecf
