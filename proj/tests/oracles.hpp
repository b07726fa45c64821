#pragma once

// Slow, literal reference implementations used only by the tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bmcp/distributions.hpp"
#include "bmcp/gev_maps.hpp"
#include "bmcp/moments.hpp"
#include "bmcp/random.hpp"

namespace oracle {

inline constexpr double euler_gamma = 0.5772156649015328606;

inline double nu(bmcp::Family f, int i, double u) {
  if (f == bmcp::Family::Pwm) return std::pow(u, i);
  const double l = std::log(u);
  if (i == 0) return -u * l;
  if (i == 1) return u * l * l;
  return -u * u * l;
}

inline double nu_prime(bmcp::Family f, int i, double u) {
  if (f == bmcp::Family::Pwm) return i == 0 ? 0.0 : i * std::pow(u, i - 1);
  const double l = std::log(u);
  if (i == 0) return -l - 1.0;
  if (i == 1) return l * l + 2.0 * l;
  return -2.0 * u * l - u;
}

inline double ecdf(const std::vector<double>& x, double at, double gamma) {
  double c = 0;
  for (double v : x)
    if (v <= at) c += 1;
  return (c + gamma) / static_cast<double>(x.size());
}

// n^{-1} sum_j X_j nu_i(F(X_j)), evaluated literally.
inline std::array<double, 3> beta_hat(const std::vector<double>& x, bmcp::Family f, double gamma) {
  std::array<double, 3> m{};
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (double v : x) s += v * nu(f, i, ecdf(x, v, gamma));
    m[i] = s / x.size();
  }
  return m;
}

// Unbiased b_i from the sorted sample with the product weights.
inline std::array<double, 3> b_hat(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = x.size();
  std::array<double, 3> m{};
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (std::size_t j = 1; j <= x.size(); ++j) {
      double w = 1;
      for (int k = 1; k <= i; ++k) w *= (static_cast<double>(j) - k) / (n - k);
      s += w * x[j - 1];
    }
    m[i] = s / n;
  }
  return m;
}

// Population moments int_0^1 G^{-1}(u) nu_i(u) du, integrated over
// s = -log u so the heavy end sits at s -> 0.
inline std::array<double, 3> population_moments(const bmcp::GevParams& p, bmcp::Family f) {
  boost::math::quadrature::tanh_sinh<double> head;
  boost::math::quadrature::exp_sinh<double> tail;
  std::array<double, 3> m{};
  for (int i = 0; i < 3; ++i) {
    auto g = [&](double s) {
      if (!(s > 0.0) || !std::isfinite(s)) return 0.0;
      const double ls = std::log(s);
      const double e = p.xi == 0.0 ? -ls : std::expm1(-p.xi * ls) / p.xi;
      const double u = std::exp(-s);
      if (u == 0.0) return 0.0;
      double w;
      if (f == bmcp::Family::Pwm) w = std::pow(u, i);
      else if (i == 0) w = u * s;
      else if (i == 1) w = u * s * s;
      else w = u * u * s;
      const double v = (p.mu + p.sigma * e) * w * u;
      return std::isfinite(v) ? v : 0.0;  // integrable endpoint singularity
    };
    m[i] = head.integrate(g, 0.0, 1.0, 1e-13) + tail.integrate(g, 1.0, std::numeric_limits<double>::infinity(), 1e-13);
  }
  return m;
}

inline bmcp::MomentTriple triple(const std::array<double, 3>& a, bmcp::Family f,
                                 bmcp::Estimator e = bmcp::Estimator::Exact, double gamma = 0.0) {
  bmcp::MomentTriple m;
  m.m1 = a[0];
  m.m2 = a[1];
  m.m3 = a[2];
  m.family = f;
  m.estimator = e;
  m.gamma = gamma;
  return m;
}

// Central differences with step 1e-6 (1 + |m_i|).
inline std::array<double, 3> finite_difference(const std::function<double(const bmcp::MomentTriple&)>& g,
                                               const bmcp::MomentTriple& m) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    auto up = m, down = m;
    double* pu = i == 0 ? &up.m1 : (i == 1 ? &up.m2 : &up.m3);
    double* pd = i == 0 ? &down.m1 : (i == 1 ? &down.m2 : &down.m3);
    const double h = 1e-6 * (1.0 + std::abs(*pu));
    *pu += h;
    *pd -= h;
    out[i] = (g(up) - g(down)) / (2 * h);
  }
  return out;
}

// Y_i = X_i nu(F(X_i)) + n^{-1} sum_j X_j nu'(F(X_j)) 1(X_i <= X_j), double loop.
inline std::array<std::vector<double>, 3> pseudo_observations(const std::vector<double>& x, bmcp::Family f,
                                                              double gamma) {
  const std::size_t n = x.size();
  std::array<std::vector<double>, 3> y;
  for (int c = 0; c < 3; ++c) {
    y[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (x[i] <= x[j]) s += x[j] * nu_prime(f, c, ecdf(x, x[j], gamma));
      y[c][i] = x[i] * nu(f, c, ecdf(x, x[i], gamma)) + s / n;
    }
  }
  return y;
}

inline double covariance(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / n;
}

// 1 - 2 sum (-1)^{k-1} exp(-2 k^2 x^2), summed to 2000 terms.
inline double kolmogorov_cdf(double x) {
  if (x <= 0) return 0.0;
  long double s = 0;
  for (int k = 1; k <= 2000; ++k) s += (k % 2 ? 1.0L : -1.0L) * std::exp(-2.0L * k * k * x * x);
  return static_cast<double>(1.0L - 2.0L * s);
}

inline std::vector<double> gev_draws(std::size_t n, const bmcp::GevParams& p, std::uint64_t seed) {
  bmcp::Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    const double lu = -std::log(bmcp::uniform_open(rng));
    v = p.xi == 0.0 ? p.mu - p.sigma * std::log(lu) : p.mu + p.sigma * (std::pow(lu, -p.xi) - 1.0) / p.xi;
  }
  return out;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace oracle
