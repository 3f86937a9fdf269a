#include "ecf/asymptotics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "ecf/ecf.hpp"
#include "ecf/errors.hpp"
#include "ecf/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ecf {
namespace {

// Branch of theta_p on one side of its jump at w = q.
double theta_branch(const InfluenceParams& ip, double w, bool lower) {
  return lower ? (w - ip.quantile) / ip.p + 2.0 / ip.density
               : (w - ip.quantile) / (1.0 - ip.p);
}

double checked(const QuadratureResult& r, const char* what) {
  if (!r.converged || !std::isfinite(r.value))
    throw NumericalError(std::string(what) + ": quadrature did not reach tolerance (achieved " +
                         std::to_string(r.error_estimate) + ")");
  return r.value;
}

}  // namespace

InfluenceParams influence_params(const DistributionModel& m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("influence: p must lie in (0,1)");
  InfluenceParams ip;
  ip.p = p;
  ip.quantile = m.quantile(p);
  ip.density = m.pdf(ip.quantile);
  if (!(ip.density > 0.0) || !std::isfinite(ip.density))
    throw NumericalError("influence: density vanishes at F^-1(" + std::to_string(p) + ")");
  ip.mu_lower = mu_lower(m, p);
  ip.mu_upper = mu_upper(m, p);
  return ip;
}

InfluenceDecomposition influence_at(const InfluenceParams& ip, double w) {
  const double p = ip.p;
  const double q = ip.quantile;
  const bool below = w <= q;
  const double ind_lo = below ? 1.0 : 0.0;
  const double ind_hi = 1.0 - ind_lo;

  InfluenceDecomposition d;
  d.xi = (w * ind_lo - q * ind_lo - (p * ip.mu_lower - p * q)) / p;
  d.tau = (w * ind_hi - q * ind_hi - ((1.0 - p) * ip.mu_upper - (1.0 - p) * q)) / (1.0 - p);
  d.kappa = (p - ind_lo) / ip.density;
  d.theta = theta_branch(ip, w, below);
  return d;
}

InfluenceDecomposition theta_eval(const DistributionModel& m, double p, double w) {
  return influence_at(influence_params(m, p), w);
}

double theta_offset(const DistributionModel& m, double p) {
  const auto ip = influence_params(m, p);
  return ip.crossover() + 2.0 * p / ip.density;
}

double theta_mean(const DistributionModel& m, double p) {
  const auto ip = influence_params(m, p);
  const double breaks[] = {p};
  const auto r = integrate_piecewise(
      [&](double u, double lo, double hi) {
        return theta_branch(ip, m.quantile(u), 0.5 * (lo + hi) <= p);
      },
      kEndpoint, 1.0 - kEndpoint, breaks);
  return checked(r, "theta_mean");
}

double cov_theta(const DistributionModel& m, double p, double r) {
  if (r < p) std::swap(p, r);
  const auto a = influence_params(m, p);
  const auto b = p == r ? a : influence_params(m, r);
  const double ca = a.crossover() + 2.0 * p / a.density;
  const double cb = b.crossover() + 2.0 * r / b.density;
  const double breaks[] = {p, r};
  const auto res = integrate_piecewise(
      [&](double u, double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double w = m.quantile(u);
        return (theta_branch(a, w, mid <= p) - ca) * (theta_branch(b, w, mid <= r) - cb);
      },
      kEndpoint, 1.0 - kEndpoint, breaks);
  return checked(res, "cov_theta");
}

double sigma_var(const DistributionModel& m, double p) { return cov_theta(m, p, p); }

double min_eigenvalue(std::span<const double> matrix, std::size_t dim) {
  Eigen::MatrixXd a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = matrix[i * dim + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CovSpec cov_grid_theoretical(const DistributionModel& m, std::span<const double> grid,
                             Execution exec, int threads) {
  if (grid.empty()) throw DomainError("cov grid: grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw DomainError("cov grid: levels must lie in (0,1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("cov grid: levels must ascend");
  }

  const std::size_t d = grid.size();
  CovSpec out;
  out.grid.assign(grid.begin(), grid.end());
  out.matrix.assign(d * d, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) pairs.emplace_back(i, j);
  std::vector<std::string> errors(pairs.size());

  auto fill = [&](std::size_t t) {
    const auto [i, j] = pairs[t];
    try {
      const double c = cov_theta(m, grid[i], grid[j]);
      out.matrix[i * d + j] = c;
      out.matrix[j * d + i] = c;
    } catch (const std::exception& e) {
      errors[t] = "cov grid entry (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.what();
    }
  };

  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
  if (exec == Execution::serial) {
    for (std::ptrdiff_t t = 0; t < count; ++t) fill(static_cast<std::size_t>(t));
  } else {
#ifdef _OPENMP
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (std::ptrdiff_t t = 0; t < count; ++t) fill(static_cast<std::size_t>(t));
  }
  (void)threads;

  for (const auto& e : errors)
    if (!e.empty()) throw NumericalError(e);

  out.min_eigenvalue = min_eigenvalue(out.matrix, d);
  if (out.min_eigenvalue < -1e-8)
    throw NumericalError("cov grid: matrix is not positive semi-definite (min eigenvalue " +
                         std::to_string(out.min_eigenvalue) + ")");
  return out;
}

double empirical_sigma(const SortedSample& s, double p, std::optional<double> bandwidth) {
  const std::size_t n = s.size();
  if (n < 20) throw DomainError("empirical_sigma: need at least 20 observations");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("empirical_sigma: p must lie in (0,1)");
  const double h = bandwidth.value_or(std::pow(static_cast<double>(n), -0.2));
  if (!(h > 0.0)) throw DomainError("empirical_sigma: bandwidth must be positive");
  if (!(p - h > 0.0 && p + h < 1.0))
    throw DomainError("empirical_sigma: bandwidth " + std::to_string(h) + " takes p +/- h outside (0,1)");

  auto sample_quantile = [&](double t) {
    const double k = std::ceil(static_cast<double>(n) * t);
    return s.at(std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n));
  };
  const double spacing = sample_quantile(p + h) - sample_quantile(p - h);
  if (!(spacing > 0.0)) throw NumericalError("empirical_sigma: zero quantile spacing, density estimate undefined");

  const std::size_t k = bucket_index(n, p);
  InfluenceParams ip;
  ip.p = p;
  ip.quantile = s.at(k);
  ip.density = 2.0 * h / spacing;
  ip.mu_lower = s.lower_sum(k) / static_cast<double>(k);
  ip.mu_upper = s.upper_sum(k) / static_cast<double>(n - k);

  // Two-pass sample variance.
  double mean = 0.0;
  for (double w : s.values()) mean += influence_at(ip, w).theta;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double w : s.values()) {
    const double dev = influence_at(ip, w).theta - mean;
    ss += dev * dev;
  }
  return ss / static_cast<double>(n - 1);
}

double newton_split_approx(const DistributionModel& m, const SortedSample& s, double p0) {
  const double slope = crossover_derivative(m, p0);
  if (slope == 0.0) throw NumericalError("newton_split_approx: G'(p0) is zero");
  return p0 - ecf_eval(s, p0) / slope;
}

double newton_split_approx(const DistributionModel& m, const SortedSample& s) {
  return newton_split_approx(m, s, find_split_point(m, 0.01, 0.99).p0);
}

}  // namespace ecf
