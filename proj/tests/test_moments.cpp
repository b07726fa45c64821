#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "bmcp/distributions.hpp"
#include "bmcp/errors.hpp"
#include "bmcp/moments.hpp"

using namespace bmcp;
using doctest::Approx;

namespace {

const std::vector<double> k123 = {1, 2, 3};

void check_triple(const MomentTriple& m, const std::array<double, 3>& want, double tol) {
  CHECK(m.m1 == Approx(want[0]).epsilon(tol));
  CHECK(m.m2 == Approx(want[1]).epsilon(tol));
  CHECK(m.m3 == Approx(want[2]).epsilon(tol));
}

}  // namespace

TEST_CASE("weights and their derivatives") {
  for (Family f : {Family::Pwm, Family::Gpwm})
    for (int i = 1; i <= 3; ++i)
      for (double u = 0.05; u < 1.0; u += 0.05) {
        CHECK(weight(f, i, u) == Approx(oracle::nu(f, i - 1, u)).epsilon(1e-14));
        const double h = 1e-6;
        const double fd = (weight(f, i, u + h) - weight(f, i, u - h)) / (2 * h);
        CHECK(weight_derivative(f, i, u) == Approx(fd).epsilon(1e-6));
      }
  CHECK_THROWS_AS(weight(Family::Pwm, 4, 0.5), PreconditionError);
}

TEST_CASE("ecdf is not clamped") {
  CHECK(ecdf(k123, 2, 0) == Approx(2.0 / 3));
  CHECK(ecdf(k123, 0.5, -0.35) == Approx(-0.35 / 3));
  CHECK(ecdf(k123, 5, -0.35) == Approx(2.65 / 3));
}

TEST_CASE("beta_hat small cases") {
  check_triple(beta_hat(k123, Family::Pwm, 0), {2, 14.0 / 9, 4.0 / 3}, 1e-14);
  const auto m = beta_hat(k123, Family::Pwm, -0.35);
  CHECK(m.m1 == Approx(2.0).epsilon(1e-14));
  CHECK(m.m2 == Approx((1 * 0.65 / 3 + 2 * 1.65 / 3 + 3 * 2.65 / 3) / 3).epsilon(1e-14));
  CHECK(m.gamma == -0.35);
  CHECK(m.estimator == Estimator::BetaHat);
  const std::vector<double> c = {4.5, 4.5, 4.5, 4.5};
  CHECK(beta_hat(c, Family::Pwm, 0).m1 == Approx(4.5));
  CHECK_THROWS_AS(beta_hat(k123, Family::Gpwm, -1.0), PreconditionError);
}

TEST_CASE("beta_hat matches the literal sum, with and without ties") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto x = oracle::gev_draws(37, {1, 2, 0.2}, seed);
    if (seed % 2) for (auto& v : x) v = std::round(v * 2) / 2;
    for (Family f : {Family::Pwm, Family::Gpwm})
      for (double g : {0.0, 0.5}) {
        if (f == Family::Pwm || g >= 0) check_triple(beta_hat(x, f, g), oracle::beta_hat(x, f, g), 1e-12);
      }
    check_triple(beta_hat(x, Family::Pwm, -0.35), oracle::beta_hat(x, Family::Pwm, -0.35), 1e-12);
  }
}

TEST_CASE("b_hat") {
  check_triple(b_hat(k123), {2, 4.0 / 3, 1}, 1e-14);
  const std::vector<double> c = {7, 7, 7};
  check_triple(b_hat(c), {7, 3.5, 7.0 / 3}, 1e-14);
  CHECK_THROWS_AS(b_hat(std::vector<double>{1, 2}), PreconditionError);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = oracle::gev_draws(3 + seed * 7, {0, 1, -0.2}, seed);
    check_triple(b_hat(x), oracle::b_hat(x), 1e-12);
    double mean = 0;
    for (double v : x) mean += v;
    CHECK(b_hat(x).m1 == Approx(mean / x.size()).epsilon(1e-14));
  }
}

TEST_CASE("b_hat affine equivariance") {
  const auto x = oracle::gev_draws(50, {0, 1, 0.1}, 4);
  const double c = 2.5, d = -3.0;
  std::vector<double> y;
  for (double v : x) y.push_back(c * v + d);
  const auto a = b_hat(x), b = b_hat(y);
  CHECK(b.m1 == Approx(c * a.m1 + d).epsilon(1e-12));
  CHECK(b.m2 == Approx(c * a.m2 + d / 2).epsilon(1e-12));
  CHECK(b.m3 == Approx(c * a.m3 + d / 3).epsilon(1e-12));
}

TEST_CASE("b_hat is unbiased") {
  const GevParams p{0, 1, 0.2};
  const auto target = exact_pwm_gev(p);
  const int reps = 10000;
  std::array<double, 3> s{}, s2{};
  Rng rng(2024);
  for (int r = 0; r < reps; ++r) {
    const auto m = b_hat(sample_gev(20, p, rng).values());
    for (int i = 0; i < 3; ++i) {
      s[i] += m[i];
      s2[i] += m[i] * m[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = s[i] / reps;
    const double se = std::sqrt((s2[i] / reps - mean * mean) / reps);
    CHECK(std::abs(mean - target[i]) < 3 * se);
  }
}

TEST_CASE("beta_hat with gamma 0 and b_hat agree to O(1/n)") {
  double prev = 1e300;
  for (std::size_t n : {50, 200, 800, 3200}) {
    const auto x = oracle::gev_draws(n, {0, 1, 0}, 77);
    const auto a = beta_hat(x, Family::Pwm, 0), b = b_hat(x);
    double d = 0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    CHECK(d * n < 10.0);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("exact population moments") {
  const double g = oracle::euler_gamma;
  check_triple(exact_pwm_gev({0, 1, 0}), {g, (g + std::log(2.0)) / 2, (g + std::log(3.0)) / 3}, 1e-14);
  CHECK(exact_pwm_gev({5, 1, 0}).m1 == Approx(5 + g).epsilon(1e-14));
  CHECK_THROWS_AS(exact_pwm_gev({0, 1, 1.0}), PreconditionError);
  CHECK_THROWS_AS(exact_gpwm_gev({0, 1, 2.0}), PreconditionError);
  for (double xi : {-0.8, -0.4, -1e-9, 0.0, 0.3, 0.7}) {
    CAPTURE(xi);
    check_triple(exact_pwm_gev({1, 2, xi}), oracle::population_moments({1, 2, xi}, Family::Pwm), 1e-9);
  }
  for (double xi : {-0.8, -0.3, 0.0, 0.5, 1.0, 1.5}) {
    CAPTURE(xi);
    check_triple(exact_gpwm_gev({1, 2, xi}), oracle::population_moments({1, 2, xi}, Family::Gpwm), 1e-8);
  }
}

TEST_CASE("D_xi membership") {
  CHECK(in_dxi(oracle::triple({2, 14.0 / 9, 4.0 / 3}, Family::Pwm)));
  CHECK_FALSE(in_dxi(oracle::triple({0, 0, 0}, Family::Pwm)));
  const auto why = dxi_violation(oracle::triple({1, 0.4, 0.3}, Family::Pwm));
  REQUIRE(why);
  CHECK(why->find("2 m2 - m1") != std::string::npos);
  for (double xi = -0.99; xi < 0.9; xi += 0.01) {
    const auto m = exact_pwm_gev({0, 1, xi});
    CHECK(2 * m.m2 - m.m1 > 0);
    CHECK(3 * m.m3 - 2 * m.m2 > 0);
    CHECK(-m.m1 + 4 * m.m2 - 3 * m.m3 > 0);
    CHECK(in_dxi(m));
  }
}

TEST_CASE("b_hat of a non-constant sample lies in D_xi") {
  Rng rng(8);
  for (int r = 0; r < 2000; ++r) {
    const std::size_t n = 3 + rng() % 48;
    std::vector<double> x(n);
    const double shape = uniform_open(rng) * 3 - 1.5;
    for (auto& v : x) v = std::pow(uniform_open(rng), shape) * 10 - 5;
    CHECK(in_dxi(b_hat(x)));
  }
  // with ties b_hat can sit on the boundary: -b1 + 4 b2 - 3 b3 = 0 here
  CHECK_FALSE(in_dxi(b_hat(std::vector<double>{0, 0, 1})));
}

TEST_CASE("D_h membership") {
  CHECK(in_dh(oracle::triple(oracle::population_moments({0, 1, 0}, Family::Gpwm), Family::Gpwm)));
  CHECK(in_dh(oracle::triple(oracle::population_moments({0, 1, 1.5}, Family::Gpwm), Family::Gpwm)));
  CHECK_FALSE(in_dh(oracle::triple({0, 0, 0}, Family::Gpwm)));
}

TEST_CASE("prefix/suffix moments equal per-k recomputation") {
  for (std::size_t n : {10, 50, 200}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto x = oracle::gev_draws(n, {0, 1, 0.3}, seed * 31 + n);
      if (seed == 4) for (auto& v : x) v = std::round(v);
      struct Case {
        Estimator e;
        Family f;
        double g;
      };
      for (Case c : {Case{Estimator::BHat, Family::Pwm, 0}, Case{Estimator::BetaHat, Family::Pwm, -0.35},
                     Case{Estimator::BetaHat, Family::Gpwm, 0}}) {
        const auto ps = prefix_suffix_moments(x, c.e, c.f, c.g);
        const auto naive = prefix_suffix_moments(x, c.e, c.f, c.g, MomentEngine::Naive);
        for (std::size_t k = 0; k <= n; ++k) {
          const std::vector<double> left(x.begin(), x.begin() + k), right(x.begin() + k, x.end());
          auto direct = [&](const std::vector<double>& s) -> std::optional<std::array<double, 3>> {
            if (s.size() < min_subsample_size(c.e)) return std::nullopt;
            if (c.e == Estimator::BHat) return oracle::b_hat(s);
            if (c.f == Family::Gpwm && (1 + c.g) / s.size() <= 0) return std::nullopt;
            return oracle::beta_hat(s, c.f, c.g);
          };
          const auto dl = direct(left), dr = direct(right);
          REQUIRE(ps.prefix[k].has_value() == dl.has_value());
          REQUIRE(ps.suffix[k].has_value() == dr.has_value());
          REQUIRE(naive.prefix[k].has_value() == dl.has_value());
          for (int i = 0; i < 3; ++i) {
            if (dl) {
              CHECK(oracle::rel_diff((*ps.prefix[k])[i], (*dl)[i]) <= 1e-10);
              CHECK(oracle::rel_diff((*naive.prefix[k])[i], (*dl)[i]) <= 1e-10);
            }
            if (dr) CHECK(oracle::rel_diff((*ps.suffix[k])[i], (*dr)[i]) <= 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("suffixes of the reversed sample are the reversed prefixes") {
  const auto x = oracle::gev_draws(60, {0, 1, 0}, 5);
  const std::vector<double> rx(x.rbegin(), x.rend());
  const auto a = prefix_suffix_moments(x, Estimator::BHat, Family::Pwm, 0);
  const auto b = prefix_suffix_moments(rx, Estimator::BHat, Family::Pwm, 0);
  for (std::size_t k = 3; k + 3 <= x.size(); ++k)
    for (int i = 0; i < 3; ++i) CHECK((*a.prefix[k])[i] == Approx((*b.suffix[x.size() - k])[i]).epsilon(1e-12));
  const auto full = b_hat(x);
  for (int i = 0; i < 3; ++i) CHECK((*a.prefix[x.size()])[i] == Approx(full[i]).epsilon(1e-13));
  CHECK_THROWS_AS(prefix_suffix_moments(std::vector<double>{1}, Estimator::BHat, Family::Pwm, 0),
                  PreconditionError);
}
