#include "ecf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ecf {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  QuadratureResult result;

  static double rule(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  void recurse(double a, double fa, double m, double fm, double b, double fb, double whole,
               double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    result.evaluations += 2;
    const double left = rule(a, fa, flm, m, fm);
    const double right = rule(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= max_depth || !(lm > a && rm < b)) {
      if (std::abs(delta) > 15.0 * tol) result.converged = false;
      result.value += left + right + delta / 15.0;
      result.error_estimate += std::abs(delta) / 15.0;
      return;
    }
    recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1);
    recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  QuadratureOptions opts) {
  Simpson s{f, opts.max_depth, {}};
  if (!(b > a)) return s.result;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  s.result.evaluations = 3;
  s.recurse(a, fa, m, fm, b, fb, Simpson::rule(a, fa, fm, b, fb), opts.abs_tol, 0);
  // A capped leaf whose excess is negligible against the total budget still counts.
  if (!s.result.converged && s.result.error_estimate <= opts.abs_tol) s.result.converged = true;
  return s.result;
}

QuadratureResult integrate_piecewise(const PanelIntegrand& f, double a, double b,
                                     std::span<const double> breaks, QuadratureOptions opts) {
  std::vector<double> nodes{a};
  for (double x : breaks)
    if (x > a && x < b) nodes.push_back(x);
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  QuadratureOptions panel = opts;
  panel.abs_tol = opts.abs_tol / static_cast<double>(nodes.size() - 1);
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i], hi = nodes[i + 1];
    const auto r = adaptive_simpson([&f, lo, hi](double u) { return f(u, lo, hi); }, lo, hi, panel);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace ecf
