#include "bmcp/baselines.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "bmcp/errors.hpp"
#include "bmcp/special_functions.hpp"

namespace bmcp {
namespace {

struct Moments2 {
  double mean, sd;
};

Moments2 mean_sd(const double* first, std::size_t count) {
  const double n = static_cast<double>(count);
  const double mean = std::accumulate(first, first + count, 0.0) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) ss += (first[i] - mean) * (first[i] - mean);
  return {mean, std::sqrt(ss / n)};
}

// Studentized mean CUSUM of z; `report` maps a side of z to what is stored
// in the result's side parameters.
template <class Report>
TestResult cusum_of(const std::vector<double>& z, std::size_t r, const std::string& name, Report report) {
  const std::size_t n = z.size();
  TestConfig config;
  config.r = r;
  config.recenter = false;
  config.validate(n);
  const Moments2 all = mean_sd(z.data(), n);
  if (!(all.sd > 0.0)) throw InfeasibleError(name + " cusum: sample has zero variance");

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + z[i];
  const double norm = std::pow(static_cast<double>(n), 1.5);
  TestResult out;
  out.name = name;
  out.config = config;
  out.statistic = -1.0;
  for (std::size_t k = r; k + r <= n; ++k) {
    const double left = prefix[k] / static_cast<double>(k);
    const double right = (prefix[n] - prefix[k]) / static_cast<double>(n - k);
    const double term = static_cast<double>(k) * static_cast<double>(n - k) / norm * std::abs(left - right);
    if (term > out.statistic) {
      out.statistic = term;
      out.argmax_k = k;
    }
  }
  out.sigma_hat = all.sd;
  out.p_value = kolmogorov_sf(out.statistic / out.sigma_hat);
  out.left_params = report(0, out.argmax_k);
  out.right_params = report(out.argmax_k, n);
  return out;
}

}  // namespace

TestResult mean_cusum(const Sample& sample, std::size_t r) {
  const auto x = sample.values();
  std::vector<double> z(x.begin(), x.end());
  return cusum_of(z, r, "mean", [&](std::size_t a, std::size_t b) {
    const auto m = mean_sd(z.data() + a, b - a);
    return GevParams{m.mean, m.sd, 0.0};
  });
}

TestResult variance_cusum(const Sample& sample, std::size_t r) {
  const auto x = sample.values();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mean) * (x[i] - mean);
  return cusum_of(z, r, "variance", [&](std::size_t a, std::size_t b) {
    const auto m = mean_sd(x.data() + a, b - a);
    return GevParams{m.mean, m.sd, 0.0};
  });
}

}  // namespace bmcp
