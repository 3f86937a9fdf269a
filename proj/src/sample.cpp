#include "ecf/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "ecf/errors.hpp"

namespace ecf {

SortedSample::SortedSample(std::vector<double> values, bool already_sorted)
    : values_(std::move(values)) {
  if (values_.size() < 2) throw DomainError("sample too small: need at least 2 values");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("sample contains a non-finite value");
  if (already_sorted) {
    if (!std::is_sorted(values_.begin(), values_.end()))
      throw DomainError("sample flagged as sorted is not in ascending order");
  } else {
    std::stable_sort(values_.begin(), values_.end());
  }

  const std::size_t n = values_.size();
  prefix_.assign(n + 1, 0.0);
  suffix_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix_[k + 1] = prefix_[k] + values_[k];
  for (std::size_t k = n; k-- > 0;) suffix_[k] = suffix_[k + 1] + values_[k];
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(prefix_.begin(), prefix_.end(), finite) || !std::all_of(suffix_.begin(), suffix_.end(), finite))
    throw NumericalError("sample partial sums overflow; rescale the data");
}

std::vector<double> read_values(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    if (*begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
      throw ParseError("not a number: '" + line.substr(first, last - first + 1) + "'", lineno);
    if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
    out.push_back(v);
  }
  return out;
}

}  // namespace ecf
