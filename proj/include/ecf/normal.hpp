#pragma once

namespace ecf::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density.
double pdf(double x) noexcept;

/// Standard normal CDF, accurate in relative terms in the lower tail.
double cdf(double x) noexcept;

/// Standard normal quantile for p in (0,1). Rational initial guess followed by
/// a Halley step on the CDF; relative error well below 1e-12 over the range
/// [1e-300, 1 - 1e-16].
double quantile(double p);

}  // namespace ecf::normal
