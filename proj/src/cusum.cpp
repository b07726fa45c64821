#include "bmcp/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bmcp/errors.hpp"
#include "bmcp/special_functions.hpp"

namespace bmcp {
namespace {

struct Profile {
  std::vector<std::optional<GevParams>> left;
  std::vector<std::optional<GevParams>> right;
  std::vector<std::size_t> skipped;
};

bool feasible(const MomentTriple& m, TestFamily family) {
  switch (family) {
    case TestFamily::PwmT: return true;
    case TestFamily::PwmS: return in_dxi(m);
    case TestFamily::GpwmS: return in_dh(m);
  }
  return false;
}

std::optional<GevParams> side_params(const std::optional<MomentTriple>& m, const TestConfig& config) {
  if (!m || !feasible(*m, config.family)) return std::nullopt;
  try {
    return to_gev(config.map(), *m);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

Profile split_profile(std::span<const double> x, const TestConfig& config) {
  const std::size_t n = x.size();
  const auto moments = prefix_suffix_moments(x, config.estimator(), config.moment_family(),
                                             config.resolved_gamma(), config.engine);
  Profile p;
  p.left.resize(n + 1);
  p.right.resize(n + 1);
  for (std::size_t k = config.r; k + config.r <= n; ++k) {
    auto l = side_params(moments.prefix[k], config);
    auto r = l ? side_params(moments.suffix[k], config) : std::nullopt;
    if (l && r) {
      p.left[k] = l;
      p.right[k] = r;
    } else {
      p.skipped.push_back(k);
    }
  }
  return p;
}

StatisticValue maximize(const Profile& p, std::size_t n, const TestConfig& config) {
  StatisticValue s;
  s.skipped_k = p.skipped;
  s.terms.resize(n + 1);
  const double norm = std::pow(static_cast<double>(n), 1.5);
  bool any = false;
  for (std::size_t k = config.r; k + config.r <= n; ++k) {
    if (!p.left[k]) continue;
    const double diff = component(*p.left[k], config.target) - component(*p.right[k], config.target);
    const double term = static_cast<double>(k) * static_cast<double>(n - k) / norm * std::abs(diff);
    s.terms[k] = term;
    if (!any || term > s.value) {
      s.value = term;
      s.argmax_k = k;
      s.left_params = *p.left[k];
      s.right_params = *p.right[k];
      any = true;
    }
  }
  if (!any) throw InfeasibleError("no feasible split: every k in [r, n-r] was skipped");
  return s;
}

double quadratic_form(const Gradient& g, const std::array<std::array<double, 3>, 3>& c) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += g[i] * g[j] * c[i][j];
  return s;
}

double sigma_from(const ApproxEvaluation& full, const std::array<std::array<double, 3>, 3>& cov,
                  const TestConfig& config, std::size_t n) {
  const double v = quadratic_form(full.gradient(config.target), cov) * config.resolved_correction(n);
  if (!(v > 0.0) || !std::isfinite(v))
    throw InfeasibleError("variance estimate is not positive (degenerate sample?)");
  return std::sqrt(v);
}

ApproxEvaluation full_evaluation(std::span<const double> x, const TestConfig& config) {
  try {
    return evaluate_approx(config.map(), full_sample_moments(x, config));
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string("full-sample moments: ") + e.what());
  }
}

}  // namespace

std::string to_string(TestFamily f) {
  switch (f) {
    case TestFamily::PwmT: return "pwm-t";
    case TestFamily::PwmS: return "pwm-s";
    case TestFamily::GpwmS: return "gpwm";
  }
  return "?";
}

double TestConfig::resolved_gamma() const {
  if (gamma) return *gamma;
  return family == TestFamily::GpwmS ? kDefaultGpwmGamma : kDefaultPwmGamma;
}

double TestConfig::resolved_correction(std::size_t n) const {
  if (variance_correction) return *variance_correction;
  if (family != TestFamily::PwmT) return 1.0;
  const double dn = static_cast<double>(n);
  if (target == Component::Sigma) return (dn + 10.0) / dn;
  if (target == Component::Xi) return (dn + 20.0) / dn;
  return 1.0;
}

Estimator TestConfig::estimator() const {
  return family == TestFamily::PwmT ? Estimator::BHat : Estimator::BetaHat;
}

Family TestConfig::moment_family() const {
  return family == TestFamily::GpwmS ? Family::Gpwm : Family::Pwm;
}

GevMapKind TestConfig::map() const {
  return family == TestFamily::GpwmS ? GevMapKind::GpwmApprox : GevMapKind::PwmApprox;
}

void TestConfig::validate(std::size_t n) const {
  if (r < 1) throw PreconditionError("r must be at least 1");
  if (2 * r > n)
    throw PreconditionError("sample of size " + std::to_string(n) + " is too short for r = " + std::to_string(r) +
                            " (need n >= 2r)");
  if (variance_correction && !(*variance_correction > 0.0))
    throw PreconditionError("variance correction must be positive");
  if (gamma && !std::isfinite(*gamma)) throw PreconditionError("gamma must be finite");
}

MomentTriple full_sample_moments(std::span<const double> x, const TestConfig& config) {
  if (config.family == TestFamily::PwmT) return b_hat(x);
  return beta_hat(x, config.moment_family(), config.resolved_gamma());
}

double location_estimate(const Sample& sample, const TestConfig& config) {
  try {
    return to_gev(config.map(), full_sample_moments(sample.values(), config)).mu;
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string("recentering: ") + e.what());
  }
}

Sample recenter(const Sample& sample, const TestConfig& config) {
  const double shift = location_estimate(sample, config);
  std::vector<double> v(sample.begin(), sample.end());
  for (double& e : v) e -= shift;
  return Sample(std::move(v));
}

StatisticValue statistic(const Sample& sample, const TestConfig& config) {
  config.validate(sample.size());
  return maximize(split_profile(sample.values(), config), sample.size(), config);
}

std::array<std::vector<double>, 3> pseudo_observations(std::span<const double> x, Family family,
                                                       double gamma) {
  const std::size_t n = x.size();
  if (n < 2) throw PreconditionError("pseudo-observations need n >= 2");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  // ecdf at each observation: (# X_j <= X_i + gamma)/n, equal within tie groups
  std::vector<double> f(n);
  for (std::size_t pos = 0; pos < n;) {
    std::size_t end = pos;
    while (end < n && x[order[end]] == x[order[pos]]) ++end;
    const double fv = (static_cast<double>(end) + gamma) / static_cast<double>(n);
    if (family == Family::Gpwm && !(fv > 0.0))
      throw PreconditionError("Gpwm pseudo-observations need positive ecdf values (gamma too small)");
    for (std::size_t q = pos; q < end; ++q) f[order[q]] = fv;
    pos = end;
  }

  std::array<std::vector<double>, 3> y;
  for (int i = 0; i < 3; ++i) {
    y[i].assign(n, 0.0);
    // tail[i] = n^{-1} sum over X_j >= current value of X_j nu'(F(X_j))
    double tail = 0.0;
    for (std::size_t end = n; end > 0;) {
      std::size_t start = end;
      while (start > 0 && x[order[start - 1]] == x[order[end - 1]]) --start;
      for (std::size_t q = start; q < end; ++q) {
        const std::size_t j = order[q];
        tail += x[j] * weight_derivative(family, i + 1, f[j]);
      }
      for (std::size_t q = start; q < end; ++q) {
        const std::size_t j = order[q];
        y[i][j] = x[j] * weight(family, i + 1, f[j]) + tail / static_cast<double>(n);
      }
      end = start;
    }
  }
  return y;
}

std::array<std::array<double, 3>, 3> pseudo_observation_covariance(std::span<const double> x,
                                                                   Family family, double gamma) {
  const auto y = pseudo_observations(x, family, gamma);
  const double n = static_cast<double>(x.size());
  std::array<double, 3> mean{};
  for (int i = 0; i < 3; ++i) mean[i] = std::accumulate(y[i].begin(), y[i].end(), 0.0) / n;
  std::array<std::array<double, 3>, 3> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < x.size(); ++t) s += (y[i][t] - mean[i]) * (y[j][t] - mean[j]);
      c[i][j] = c[j][i] = s / n;
    }
  return c;
}

double sigma_hat(const Sample& sample, const TestConfig& config) {
  const auto x = sample.values();
  const auto cov = pseudo_observation_covariance(x, config.moment_family(), config.resolved_gamma());
  return sigma_from(full_evaluation(x, config), cov, config, sample.size());
}

std::vector<TestResult> run_tests(const Sample& sample, const TestConfig& config,
                                  std::span<const Component> targets) {
  const std::size_t n = sample.size();
  config.validate(n);
  const double shift = config.recenter ? location_estimate(sample, config) : 0.0;
  const Sample data = config.recenter ? recenter(sample, config) : sample;
  const auto x = data.values();

  const Profile profile = split_profile(x, config);
  const ApproxEvaluation full = full_evaluation(x, config);
  const auto cov = pseudo_observation_covariance(x, config.moment_family(), config.resolved_gamma());

  std::vector<TestResult> out;
  out.reserve(targets.size());
  for (Component target : targets) {
    TestConfig c = config;
    c.target = target;
    const StatisticValue s = maximize(profile, n, c);
    TestResult r;
    r.name = to_string(c.family) + "/" + to_string(target);
    r.config = c;
    r.statistic = s.value;
    r.sigma_hat = sigma_from(full, cov, c, n);
    r.p_value = kolmogorov_sf(r.statistic / r.sigma_hat);
    r.argmax_k = s.argmax_k;
    r.left_params = s.left_params;
    r.right_params = s.right_params;
    r.left_params.mu += shift;
    r.right_params.mu += shift;
    r.skipped_k = s.skipped_k;
    r.location_shift = shift;
    out.push_back(std::move(r));
  }
  return out;
}

TestResult run_test(const Sample& sample, const TestConfig& config) {
  const Component t[] = {config.target};
  return run_tests(sample, config, t).front();
}

}  // namespace bmcp
