#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmcp/gev_maps.hpp"
#include "bmcp/moments.hpp"
#include "bmcp/sample.hpp"

namespace bmcp {

// PwmT : b-hat moments, no feasibility indicator
// PwmS : beta-hat moments, split counted only when both sides lie in D_xi
// GpwmS: Gpwm beta-hat moments, split counted only when both sides lie in D_h
enum class TestFamily { PwmT, PwmS, GpwmS };

std::string to_string(TestFamily f);

inline constexpr std::size_t kDefaultTrim = 10;
inline constexpr double kDefaultPwmGamma = -0.35;
inline constexpr double kDefaultGpwmGamma = 0.0;

struct TestConfig {
  TestFamily family = TestFamily::PwmT;
  Component target = Component::Mu;
  std::size_t r = kDefaultTrim;
  // Plotting-position constant of the moment estimator and of the
  // pseudo-observations. Unset: -0.35 for the Pwm families, 0 for Gpwm.
  std::optional<double> gamma;
  bool recenter = true;
  // Factor applied to sigma_hat^2. Unset: (n+10)/n for PwmT/sigma,
  // (n+20)/n for PwmT/xi, 1 otherwise.
  std::optional<double> variance_correction;
  MomentEngine engine = MomentEngine::Incremental;

  double resolved_gamma() const;
  double resolved_correction(std::size_t n) const;
  Estimator estimator() const;
  Family moment_family() const;
  GevMapKind map() const;
  // Throws PreconditionError unless 1 <= r <= n/2 and the correction is positive.
  void validate(std::size_t n) const;
};

struct TestResult {
  // "pwm-t/mu", "gpwm/xi", ..., or "mean" / "variance" for the baselines.
  std::string name;
  TestConfig config;
  double statistic = 0.0;
  double sigma_hat = 0.0;
  double p_value = 1.0;
  // Split after observation argmax_k: left side X_1..X_k.
  std::size_t argmax_k = 0;
  // Map applied to each side at argmax_k, on the scale of the input data.
  // The baselines store the side mean and standard deviation in mu and sigma.
  GevParams left_params;
  GevParams right_params;
  std::vector<std::size_t> skipped_k;
  // Amount subtracted from the data before testing (0 without recentering).
  double location_shift = 0.0;
};

// Moment triple of the whole sample, with the estimator the test uses.
MomentTriple full_sample_moments(std::span<const double> x, const TestConfig& config);

// Location estimate used for recentering.
double location_estimate(const Sample& sample, const TestConfig& config);
Sample recenter(const Sample& sample, const TestConfig& config);

struct StatisticValue {
  double value = 0.0;
  std::size_t argmax_k = 0;
  std::vector<std::size_t> skipped_k;
  // terms[k] = k(n-k)/n^{3/2} |g(left) - g(right)|; empty outside
  // [r, n-r] and for skipped k.
  std::vector<std::optional<double>> terms;
  GevParams left_params;
  GevParams right_params;
};

// CUSUM statistic on the data as given (no recentering). Throws
// InfeasibleError when every split is skipped.
StatisticValue statistic(const Sample& sample, const TestConfig& config);

// Columns Y_{nu_1}, Y_{nu_2}, Y_{nu_3}:
//   Y_i = X_i nu(F(X_i)) + n^{-1} sum_j X_j nu'(F(X_j)) 1(X_i <= X_j)
// with F the ecdf of the whole sample under `gamma`.
std::array<std::vector<double>, 3> pseudo_observations(std::span<const double> x, Family family,
                                                       double gamma);

// Plug-in covariance (divisor n) of the three pseudo-observation columns.
std::array<std::array<double, 3>, 3> pseudo_observation_covariance(std::span<const double> x,
                                                                   Family family, double gamma);

// sqrt of grad' Cov(Y) grad times the variance correction, the gradient
// taken at the full-sample triple. No recentering. Throws InfeasibleError
// when the variance is not positive.
double sigma_hat(const Sample& sample, const TestConfig& config);

TestResult run_test(const Sample& sample, const TestConfig& config);

// run_test for several targets of one family, sharing the moment and
// pseudo-observation work. config.target is ignored.
std::vector<TestResult> run_tests(const Sample& sample, const TestConfig& config,
                                  std::span<const Component> targets);

}  // namespace bmcp
