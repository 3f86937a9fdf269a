#include "ecf/ecf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecf/errors.hpp"

namespace ecf {

std::size_t bucket_index(std::size_t n, double p) {
  if (n < 2) throw DomainError("bucket_index: n must be at least 2");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("bucket_index: p must lie in (0,1)");
  const double k = std::ceil(static_cast<double>(n) * p);
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n - 1);
}

double ecf_at_bucket(const SortedSample& s, std::size_t k) {
  const std::size_t n = s.size();
  const double kd = static_cast<double>(k);
  const double rd = static_cast<double>(n - k);
  const double lower = (s.lower_sum(k) - kd * s.at(k)) / kd;
  const double upper = (s.upper_sum(k) - rd * s.at(k + 1)) / rd;
  return std::min(lower, 0.0) + std::max(upper, 0.0);
}

double ecf_eval(const SortedSample& s, double p) { return ecf_at_bucket(s, bucket_index(s.size(), p)); }

EcfCurve make_curve(std::size_t n, std::vector<double> g) {
  if (n < 2 || g.size() != n - 1) throw DomainError("curve: expected n - 1 bucket values");
  EcfCurve c;
  c.n = n;
  c.g = std::move(g);
  const auto it = std::find_if(c.g.begin(), c.g.end(), [](double v) { return v <= 0.0; });
  if (it == c.g.end()) throw DomainError("curve never crosses zero");
  c.crossing_k = static_cast<std::size_t>(it - c.g.begin()) + 1;
  c.p_hat = static_cast<double>(c.crossing_k) / static_cast<double>(n);
  return c;
}

EcfCurve ecf_curve(const SortedSample& s) {
  const std::size_t n = s.size();
  std::vector<double> g(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    g[k - 1] = ecf_at_bucket(s, k);
    if (!std::isfinite(g[k - 1])) throw NumericalError("ECF overflows at bucket " + std::to_string(k));
  }
  return make_curve(n, std::move(g));
}

EmpiricalSplit empirical_split_point(const SortedSample& s) {
  const std::size_t n = s.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double g = ecf_at_bucket(s, k);
    if (!std::isfinite(g)) throw NumericalError("ECF overflows at bucket " + std::to_string(k));
    if (g <= 0.0)
      return {k, static_cast<double>(k) / static_cast<double>(n)};
  }
  // Unreachable: the last bucket is never positive.
  return {n - 1, static_cast<double>(n - 1) / static_cast<double>(n)};
}

TwoClusterSplit two_cluster_split(const SortedSample& s) {
  const auto [k, p] = empirical_split_point(s);
  const auto values = s.values();
  return {k, p, s.at(k), values.first(k), values.subspan(k)};
}

}  // namespace ecf
