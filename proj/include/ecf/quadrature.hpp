#pragma once

#include <functional>
#include <cstddef>
#include <span>

namespace ecf {

struct QuadratureResult {
  double value = 0.0;
  /// Sum of |S2 - S1|/15 over accepted leaves; an estimate of the absolute error.
  double error_estimate = 0.0;
  /// False when some leaf hit the recursion cap with an error above its share.
  bool converged = true;
  long evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  int max_depth = 60;
};

/// Adaptive Simpson on [a, b].
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  QuadratureOptions opts = {});

/// Piecewise integrand f(u, lo, hi): evaluated only for u in the panel
/// [lo, hi], so each piece can take its own one-sided branch at a jump.
using PanelIntegrand = std::function<double(double u, double lo, double hi)>;

/// Integrates over [a, b] split at every interior break point. Break points
/// outside (a, b) are ignored and duplicates merged; the absolute tolerance
/// is shared evenly across panels.
QuadratureResult integrate_piecewise(const PanelIntegrand& f, double a, double b,
                                     std::span<const double> breaks, QuadratureOptions opts = {});

}  // namespace ecf
