#include "ecf/ks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ecf/errors.hpp"
#include "ecf/normal.hpp"

namespace ecf {

double kolmogorov_pvalue(double x) {
  if (!(x > 0.0)) return 1.0;
  if (x < 1.0) {
    // P(K <= x) = sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double t = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * t);
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_normal(std::span<const double> values, double variance) {
  if (values.empty()) throw DomainError("ks test: no values");
  if (!(variance > 0.0)) throw DomainError("ks test: variance must be positive");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double sd = std::sqrt(variance);
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal::cdf(x[i] / sd);
    const double above = static_cast<double>(i + 1) / m - f;
    const double below = f - static_cast<double>(i) / m;
    d = std::max({d, above, below});
  }
  return {d, kolmogorov_pvalue(std::sqrt(m) * d)};
}

}  // namespace ecf
