#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ecf/distmodel.hpp"
#include "ecf/sample.hpp"

namespace ecf {

/// Constants the influence function of G_n(p) depends on. Either the
/// population values of a model or plug-in estimates from a sample.
struct InfluenceParams {
  double p = 0.5;
  double quantile = 0.0;  // F^-1(p)
  double density = 1.0;   // f(F^-1(p)), > 0
  double mu_lower = 0.0;
  double mu_upper = 0.0;

  double crossover() const noexcept { return mu_lower + mu_upper - 2.0 * quantile; }
};

/// Population constants of `m` at level p. Throws NumericalError when the
/// density vanishes at the quantile.
InfluenceParams influence_params(const DistributionModel& m, double p);

/// Influence function at a point w, in two forms.
///
/// `theta` is the direct form
///   (w - q) 1{w <= q} / p + (w - q) 1{w > q} / (1 - p) + 2 1{w <= q} / f(q).
/// `xi`, `tau` and `kappa` are the mean-zero parts of the linearisation of the
/// lower trimmed mean, the upper trimmed mean and the sample quantile, and
/// z() = xi + tau - 2 kappa. The forms differ by the constant
/// theta - z() = G(p) + 2p/f(q), so they share every variance and covariance.
struct InfluenceDecomposition {
  double xi = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  double theta = 0.0;

  double z() const noexcept { return xi + tau - 2.0 * kappa; }
};

InfluenceDecomposition influence_at(const InfluenceParams& ip, double w);
InfluenceDecomposition theta_eval(const DistributionModel& m, double p, double w);

/// theta - z() for the model at level p, i.e. G(p) + 2p/f(q). Also E[theta].
double theta_offset(const DistributionModel& m, double p);

/// E[theta_p] by quadrature over the probability scale.
double theta_mean(const DistributionModel& m, double p);

/// Var(theta_p): the variance of the normal limit of sqrt(n)(G_n(p) - G(p)).
/// Quadrature over u in (0,1) split at u = p. Throws NumericalError on a
/// vanishing density or when quadrature misses its tolerance.
double sigma_var(const DistributionModel& m, double p);

/// Cov(theta_p, theta_r). cov_theta(m, p, p) == sigma_var(m, p) and the
/// result is symmetric in (p, r) bit for bit.
double cov_theta(const DistributionModel& m, double p, double r);

/// Covariance of the limiting Gaussian process on a grid of levels.
struct CovSpec {
  std::vector<double> grid;
  /// Row-major grid.size() x grid.size().
  std::vector<double> matrix;
  double min_eigenvalue = 0.0;

  std::size_t dim() const noexcept { return grid.size(); }
  double at(std::size_t i, std::size_t j) const { return matrix[i * grid.size() + j]; }
};

enum class Execution { serial, parallel };

/// Fills the covariance matrix over an ascending grid in (0,1). The upper
/// triangle is computed and mirrored, so the result is exactly symmetric.
/// Throws NumericalError naming the offending (i, j), or when the matrix is
/// not positive semi-definite (min eigenvalue < -1e-8).
CovSpec cov_grid_theoretical(const DistributionModel& m, std::span<const double> grid,
                             Execution exec = Execution::parallel, int threads = 0);

/// Smallest eigenvalue of a symmetric row-major matrix.
double min_eigenvalue(std::span<const double> matrix, std::size_t dim);

/// Plug-in estimate of sigma_var from data alone: the sample variance of the
/// influence function with q, mu_lower, mu_upper replaced by the sample
/// quantile and trimmed means at bucket_index(n, p), and f(q) by the
/// quantile-spacing estimate 2h / (Q_n(p+h) - Q_n(p-h)). Default bandwidth
/// h = n^(-1/5).
double empirical_sigma(const SortedSample& s, double p, std::optional<double> bandwidth = {});

/// One Newton step from the model split point p0 towards the zero of G_n:
///   p0 - G_n(p0) / G'(p0).
double newton_split_approx(const DistributionModel& m, const SortedSample& s);
double newton_split_approx(const DistributionModel& m, const SortedSample& s, double p0);

}  // namespace ecf
