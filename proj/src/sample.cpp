#include "bmcp/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmcp/errors.hpp"

namespace bmcp {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw PreconditionError("sample must contain at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw PreconditionError("sample value at index " + std::to_string(i) + " is not finite");
  }
}

Sample Sample::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last > values_.size())
    throw PreconditionError("invalid sample slice");
  return Sample(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                    values_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Sample Sample::reversed() const { return Sample(std::vector<double>(values_.rbegin(), values_.rend())); }

std::vector<double> Sample::sorted() const {
  std::vector<double> s = values_;
  std::stable_sort(s.begin(), s.end());
  return s;
}

std::size_t Sample::distinct_count() const {
  auto s = sorted();
  return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

}  // namespace bmcp
