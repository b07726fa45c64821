#pragma once

#include <cstddef>

#include "bmcp/cusum.hpp"
#include "bmcp/sample.hpp"

namespace bmcp {

// max_k k(n-k)/n^{3/2} |mean(X_1..X_k) - mean(X_{k+1}..X_n)| over
// k in [r, n-r], studentized by the full-sample standard deviation
// (divisor n). Throws InfeasibleError for a constant sample.
TestResult mean_cusum(const Sample& sample, std::size_t r = kDefaultTrim);

// The same CUSUM applied to (X_i - mean)^2, studentized by the standard
// deviation of those squared deviations.
TestResult variance_cusum(const Sample& sample, std::size_t r = kDefaultTrim);

}  // namespace bmcp
