#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ecf/sample.hpp"

namespace ecf {

/// Bucket of level p for a sample of size n: clamp(ceil(n p), 1, n - 1).
std::size_t bucket_index(std::size_t n, double p);

/// ECF value at bucket k in [1, n-1]:
///   mean(W_(1..k)) - W_(k) + mean(W_(k+1..n)) - W_(k+1).
/// O(1) from the sample's running sums. The first pair is never positive and
/// the second never negative; each is clamped to its sign so that rounding
/// cannot flip it.
double ecf_at_bucket(const SortedSample& s, std::size_t k);

/// G_n(p) for p in (0,1).
double ecf_eval(const SortedSample& s, double p);

struct EcfCurve {
  std::size_t n = 0;
  /// g[k-1] is the value at bucket k, k = 1..n-1.
  std::vector<double> g;
  /// Smallest k with g <= 0.
  std::size_t crossing_k = 0;
  double p_hat = 0.0;

  double at(std::size_t k) const { return g[k - 1]; }
};

/// All n-1 bucket values in O(n); entries equal ecf_eval bit for bit.
EcfCurve ecf_curve(const SortedSample& s);

/// Rebuilds crossing_k and p_hat from n and g. Throws DomainError if the
/// sizes disagree or no entry is <= 0.
EcfCurve make_curve(std::size_t n, std::vector<double> g);

struct EmpiricalSplit {
  std::size_t k_star = 0;
  double p_n = 0.0;
};

EmpiricalSplit empirical_split_point(const SortedSample& s);

struct TwoClusterSplit {
  std::size_t k_star = 0;
  double p_n = 0.0;
  double split_value = 0.0;  // W_(k_star)
  /// Views into the sample: W_(1..k_star) and W_(k_star+1..n).
  std::span<const double> left;
  std::span<const double> right;
};

/// Splits the sorted sample at the ECF crossing. The spans borrow from `s`.
TwoClusterSplit two_cluster_split(const SortedSample& s);

}  // namespace ecf
