#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ecf {

/// Integrands over u in (0,1) are evaluated on [kEndpoint, 1 - kEndpoint].
inline constexpr double kEndpoint = 1e-12;

struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;
};

struct ExponentialLaw {
  double rate = 1.0;
};

struct UniformLaw {
  double lo = 0.0;
  double hi = 1.0;
};

/// A user law given by its quantile and density. The CDF is recovered by
/// inverting the quantile and the partial means come from quadrature.
struct CustomLaw {
  std::string name;
  std::function<double(double)> quantile;
  std::function<double(double)> pdf;
};

/// A continuous law with a strictly increasing CDF on its support and a
/// finite second moment. Immutable once built.
class DistributionModel {
 public:
  using Family = std::variant<NormalLaw, ExponentialLaw, UniformLaw, CustomLaw>;

  static DistributionModel normal(double mean, double sd);
  static DistributionModel exponential(double rate);
  static DistributionModel uniform(double lo, double hi);
  static DistributionModel custom(std::string name, std::function<double(double)> quantile,
                                  std::function<double(double)> pdf);

  /// Parses "normal:MEAN,SD", "exp:RATE" (or "exponential:RATE") and "uniform:LO,HI".
  static DistributionModel parse(std::string_view spec);

  const Family& family() const noexcept { return family_; }
  /// Canonical string form, accepted back by parse() for the built-in families.
  std::string spec() const;

  double quantile(double p) const;
  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const noexcept { return mean_; }

  /// Integral of the quantile over (0, p). Closed form where the family has one.
  double partial_mean(double p) const;
  /// Integral of the quantile over (p, 1).
  double upper_partial_mean(double p) const;
  /// partial_mean by adaptive quadrature only; used to check the closed forms.
  double partial_mean_quadrature(double p) const;
  bool has_closed_form() const noexcept { return !std::holds_alternative<CustomLaw>(family_); }

 private:
  explicit DistributionModel(Family f);
  Family family_;
  double mean_ = 0.0;
};

// Population functionals of a model at level p in (0,1).

double mu_lower(const DistributionModel& m, double p);
double mu_upper(const DistributionModel& m, double p);
/// mu_lower + mu_upper - 2 F^-1(p); its zero is the split point.
double crossover(const DistributionModel& m, double p);
/// Between-cluster sum of squares of the split at level p.
double split_function(const DistributionModel& m, double p);
/// d/dp of split_function, equal to (mu_upper - mu_lower) * crossover.
double split_derivative(const DistributionModel& m, double p);
/// d/dp of crossover. Throws NumericalError when the density vanishes at F^-1(p).
double crossover_derivative(const DistributionModel& m, double p);

struct SplitDiagnostics {
  double p0 = 0.0;
  double split_value = 0.0;
  double split_at_p0 = 0.0;
  double derivative_residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// Every root located on the scan grid, ascending. p0 is the one with the largest split_function.
  std::vector<double> roots;
};

struct SplitSearchOptions {
  int grid_points = 1024;
  double width_tol = 1e-10;
};

/// Locates zeros of crossover() inside [lo, hi] by grid scan plus bisection.
/// Throws NumericalError when no sign change is found.
SplitDiagnostics find_split_point(const DistributionModel& m, double lo, double hi,
                                  SplitSearchOptions opts = {});

}  // namespace ecf
