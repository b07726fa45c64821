#pragma once

// Shape-parameter functions of the form (a^xi * Gamma(b - xi) - 1) / xi that
// appear in every GEV moment relation, evaluated together with their
// derivative in xi. Near xi = 0 they are removable singularities; a Taylor
// expansion is used there instead of the cancelling direct formula.

#include <array>
#include <cmath>

#include "bmcp/special_functions.hpp"

namespace bmcp::detail {

struct ValueAndSlope {
  double value;
  double slope;
};

// Below this |xi| the Taylor branch is used. Ten terms keep the truncation
// error under 1e-18 there.
inline constexpr double kShapeSeriesSwitch = 1e-2;

// zeta(2..11)
inline constexpr std::array<double, 10> kZeta = {
    1.6449340668482264, 1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
    1.0173430619844491, 1.0083492773819228, 1.0040773561979443, 1.0020083928260822,
    1.0009945751278181, 1.0004941886041195};

// (a^xi * G(xi) - 1) / xi with G(xi) = 1 (gamma_shift 0), Gamma(1 - xi)
// (gamma_shift 1) or Gamma(2 - xi) (gamma_shift 2).
inline ValueAndSlope expm1_ratio(double xi, double log_a, int gamma_shift) {
  if (std::abs(xi) < kShapeSeriesSwitch) {
    // log G(xi) + xi log a = sum_k l_k xi^k
    constexpr int kTerms = 11;
    std::array<double, kTerms + 1> l{};
    l[1] = log_a;
    if (gamma_shift >= 1) {
      const double shift = static_cast<double>(gamma_shift - 1);
      l[1] += kEulerGamma - shift;
      for (int k = 2; k <= kTerms; ++k) l[k] = (kZeta[k - 2] - shift) / k;
    }
    // exp of a power series: e_n = (1/n) sum_{k=1}^{n} k l_k e_{n-k}
    std::array<double, kTerms + 1> e{};
    e[0] = 1.0;
    for (int n = 1; n <= kTerms; ++n) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k) s += k * l[k] * e[n - k];
      e[n] = s / n;
    }
    double value = 0.0, slope = 0.0;
    for (int n = kTerms; n >= 1; --n) value = value * xi + e[n];
    for (int n = kTerms; n >= 2; --n) slope = slope * xi + (n - 1) * e[n];
    return {value, slope};
  }
  if (gamma_shift == 0) {
    const double y = xi * log_a;
    const double em1 = std::expm1(y);
    return {em1 / xi, (log_a * (em1 + 1.0) * xi - em1) / (xi * xi)};
  }
  const double b = static_cast<double>(gamma_shift);
  const double g = std::exp(xi * log_a) * gamma_fn(b - xi);
  const double dg = g * (log_a - digamma(b - xi));
  return {(g - 1.0) / xi, (dg * xi - (g - 1.0)) / (xi * xi)};
}

}  // namespace bmcp::detail
