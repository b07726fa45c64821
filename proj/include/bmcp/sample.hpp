#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bmcp {

// Observations in their original (time) order. Never empty, all finite.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // X_k..X_l (0-based, half-open [first, last)).
  Sample slice(std::size_t first, std::size_t last) const;
  Sample reversed() const;
  std::vector<double> sorted() const;
  std::size_t distinct_count() const;

 private:
  std::vector<double> values_;
};

}  // namespace bmcp
