#pragma once

#include <span>

namespace ecf {

struct KsResult {
  double statistic = 0.0;  // D
  double pvalue = 1.0;
};

/// Survival function of the limiting Kolmogorov distribution,
/// P(K > x) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2). Below x = 1 the
/// equivalent theta-function series is summed instead, which converges in a
/// handful of terms where the alternating one does not. Clamped to [0,1].
double kolmogorov_pvalue(double x);

/// One-sample KS test of `values` against the fully specified N(0, variance).
/// The p-value is the asymptotic one for sqrt(m) D. Throws DomainError on an
/// empty input or variance <= 0.
KsResult ks_test_normal(std::span<const double> values, double variance);

}  // namespace ecf
