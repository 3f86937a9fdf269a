#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <vector>

namespace ecf {

/// Order statistics W_(1) <= ... <= W_(n) with running sums from both ends.
///
/// Indices in the accessors are 1-based to match order-statistic notation:
/// `at(k)` is W_(k), `lower_sum(k)` is W_(1) + ... + W_(k) and
/// `upper_sum(k)` is W_(k+1) + ... + W_(n). `lower_sum(1) == at(1)` and
/// `upper_sum(n-1) == at(n)` hold exactly.
class SortedSample {
 public:
  /// Sorts (stably) unless `already_sorted` is set; in that case the order is
  /// checked and a DomainError is thrown on a violation. Requires n >= 2 and
  /// finite values. Throws NumericalError when a partial sum overflows.
  explicit SortedSample(std::vector<double> values, bool already_sorted = false);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t k) const { return values_[k - 1]; }
  double lower_sum(std::size_t k) const { return prefix_[k]; }
  double upper_sum(std::size_t k) const { return suffix_[k]; }
  double total() const noexcept { return prefix_.back(); }

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the first k values
  std::vector<double> suffix_;  // suffix_[k] = sum of values k+1..n
};

/// Reads one number per line. Blank lines and text after '#' are ignored.
/// NaN, Inf and unparsable lines raise ParseError carrying the line number.
std::vector<double> read_values(std::istream& in);

}  // namespace ecf
