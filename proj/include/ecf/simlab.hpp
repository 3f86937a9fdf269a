#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecf/asymptotics.hpp"
#include "ecf/distmodel.hpp"
#include "ecf/sample.hpp"

namespace ecf {

enum class Experiment { tn_summary, ks_normality, cov_grid };

const char* to_string(Experiment e) noexcept;
/// Accepts "tn_summary", "ks_normality", "cov_grid". Throws ParseError otherwise.
Experiment parse_experiment(const std::string& name);

struct SimConfig {
  DistributionModel model = DistributionModel::normal(0.0, 1.0);
  double p = 0.5;
  std::size_t n = 1000;
  std::size_t replicates = 1000;
  std::uint64_t seed = 20120101;
  Experiment experiment = Experiment::tn_summary;
  std::vector<double> grid;  // cov_grid only
  /// 0 lets OpenMP choose.
  int threads = 0;

  /// Throws DomainError describing the first violated constraint.
  void validate() const;
};

struct SimReport {
  std::string model;
  Experiment experiment = Experiment::tn_summary;
  double p = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  /// T_n = sqrt(n) (G_n(p) - G(p)), one per replicate in replicate order.
  std::vector<double> tn_values;
  double mean = 0.0;
  double variance = 0.0;  // divisor R - 1
  double theoretical_sigma = 0.0;
  double crossover = 0.0;  // G(p)
  std::optional<double> ks_statistic;
  std::optional<double> ks_pvalue;
  double wall_time = 0.0;  // seconds
};

struct CovGridReport {
  std::string model;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> grid;
  /// Row-major empirical covariance of U_n over the grid, divisor R - 1.
  std::vector<double> empirical;
  CovSpec theoretical;
  double max_abs_error = 0.0;
  double wall_time = 0.0;

  double empirical_at(std::size_t i, std::size_t j) const { return empirical[i * grid.size() + j]; }
};

/// n i.i.d. draws F^-1(U), U from Philox stream (seed, stream), ascending.
std::vector<double> draw_iid(const DistributionModel& m, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream);
/// draw_iid wrapped as a SortedSample (n >= 2).
SortedSample sample_iid(const DistributionModel& m, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream);

/// Replicate r uses stream r. Results do not depend on `exec` or the thread
/// count. Runs the KS test against N(0, theoretical_sigma) when the
/// experiment is ks_normality.
SimReport simulate_tn(const SimConfig& cfg, Execution exec = Execution::parallel);

/// One report per sample size, same seed and replicate streams for each.
std::vector<SimReport> simulate_table(SimConfig cfg, const std::vector<std::size_t>& sizes,
                                      Execution exec = Execution::parallel);

/// Empirical covariance of (U_n(p_1), ..., U_n(p_d)) against the theoretical
/// one. Requires grid within [0.05, 0.95] and R >= 100.
CovGridReport simulate_cov_grid(const SimConfig& cfg, Execution exec = Execution::parallel);

}  // namespace ecf
