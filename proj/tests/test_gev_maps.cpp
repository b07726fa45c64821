#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "bmcp/errors.hpp"
#include "bmcp/gev_maps.hpp"

using namespace bmcp;
using doctest::Approx;

namespace {

MomentTriple gumbel_pwm() {
  const double g = oracle::euler_gamma;
  return oracle::triple({g, (g + std::log(2.0)) / 2, (g + std::log(3.0)) / 3}, Family::Pwm);
}

MomentTriple gpwm_of(const GevParams& p) { return oracle::triple(oracle::population_moments(p, Family::Gpwm), Family::Gpwm); }
MomentTriple pwm_of(const GevParams& p) { return oracle::triple(oracle::population_moments(p, Family::Pwm), Family::Pwm); }

void check_params(const GevParams& got, const GevParams& want, double tol) {
  CHECK(got.mu == Approx(want.mu).epsilon(tol));
  CHECK(got.sigma == Approx(want.sigma).epsilon(tol));
  CHECK(std::abs(got.xi - want.xi) <= tol);
}

}  // namespace

TEST_CASE("Gumbel moments map to (0, 1, 0)") {
  const auto e = pwm_to_gev_exact(gumbel_pwm());
  CHECK(std::abs(e.mu) < 1e-8);
  CHECK(std::abs(e.sigma - 1) < 1e-8);
  CHECK(std::abs(e.xi) < 1e-8);
  const auto a = pwm_to_gev_approx(gumbel_pwm());
  CHECK(std::abs(a.xi) <= 1e-14);
  CHECK(std::abs(a.mu) < 1e-10);
  CHECK(std::abs(a.sigma - 1) < 1e-10);
}

TEST_CASE("pwm_to_gev_exact round trips") {
  check_params(pwm_to_gev_exact(pwm_of({2, 3, -0.3})), {2, 3, -0.3}, 1e-8);
  for (double mu : {-1.0, 0.0, 10.0})
    for (double sigma : {0.5, 1.0, 4.0})
      for (double xi = -0.8; xi <= 0.41; xi += 0.1) {
        CAPTURE(xi);
        check_params(pwm_to_gev_exact(pwm_of({mu, sigma, xi})), {mu, sigma, xi}, 1e-6);
      }
  // far outside the initial bracket
  check_params(pwm_to_gev_exact(exact_pwm_gev({0, 1, -7.0})), {0, 1, -7.0}, 1e-6);
}

TEST_CASE("pwm_to_gev_exact scale homogeneity") {
  for (double xi : {-0.5, 0.0, 0.3}) {
    const auto base = pwm_to_gev_exact(exact_pwm_gev({0, 1, xi}));
    const auto scaled = pwm_to_gev_exact(exact_pwm_gev({0, 3.5, xi}));
    CHECK(scaled.sigma == Approx(3.5 * base.sigma).epsilon(1e-10));
    CHECK(scaled.xi == Approx(base.xi).epsilon(1e-10));
  }
}

TEST_CASE("pwm maps reject triples outside D_xi") {
  const auto bad = oracle::triple({1, 0.4, 0.3}, Family::Pwm);
  CHECK_THROWS_AS(pwm_to_gev_exact(bad), InfeasibleError);
  CHECK_THROWS_AS(pwm_to_gev_approx(bad), InfeasibleError);
}

TEST_CASE("pwm exact output stays admissible inside D_xi") {
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> x(3 + rng() % 30);
    for (auto& v : x) v = std::pow(uniform_open(rng), -0.9) * (1 + (rng() % 3));
    const auto m = b_hat(x);
    if (!in_dxi(m)) continue;
    const auto p = pwm_to_gev_exact(m);
    CHECK(p.xi < 1.0);
    CHECK(p.sigma > 0.0);
  }
}

TEST_CASE("pwm approximation accuracy on a shape grid") {
  double worst = 0;
  for (double xi = -0.8; xi <= 0.41; xi += 0.05) {
    const auto m = exact_pwm_gev({0, 1, xi});
    worst = std::max(worst, std::abs(pwm_to_gev_approx(m).xi - xi));
  }
  // the polynomial itself is off by 0.01002 at xi = -0.8, well inside on [-0.5, 0.5]
  CHECK(worst < 0.0101);
  for (double xi = -0.5; xi <= 0.51; xi += 0.05)
    CHECK(std::abs(pwm_to_gev_approx(exact_pwm_gev({0, 1, xi})).xi - xi) < 1e-3);
}

TEST_CASE("gpwm_to_gev_exact round trips") {
  check_params(gpwm_to_gev_exact(gpwm_of({0, 1, 0})), {0, 1, 0}, 1e-6);
  check_params(gpwm_to_gev_exact(gpwm_of({1, 2, 0.5})), {1, 2, 0.5}, 1e-6);
  for (double mu : {-2.0, 0.0, 5.0})
    for (double sigma : {0.5, 2.0})
      for (double xi = -0.8; xi <= 1.51; xi += 0.1) {
        CAPTURE(xi);
        check_params(gpwm_to_gev_exact(gpwm_of({mu, sigma, xi})), {mu, sigma, xi}, 1e-6);
      }
}

TEST_CASE("gpwm_to_gev_exact location shift") {
  const auto a = gpwm_to_gev_exact(exact_gpwm_gev({0, 1, 0.3}));
  const auto b = gpwm_to_gev_exact(exact_gpwm_gev({42, 1, 0.3}));
  CHECK(b.mu - a.mu == Approx(42).epsilon(1e-9));
  CHECK(b.xi == Approx(a.xi).epsilon(1e-10));
}

TEST_CASE("gpwm exact failures") {
  CHECK_THROWS_AS(gpwm_to_gev_exact(oracle::triple({0, 0, 0}, Family::Gpwm)), SolverError);
  CHECK_THROWS_AS(gpwm_to_gev_exact(gumbel_pwm()), PreconditionError);
}

TEST_CASE("gpwm approximation") {
  CHECK(std::abs(gpwm_to_gev_approx(gpwm_of({0, 1, 0})).xi) < 0.01);
  double worst = 0;
  for (double xi = -0.8; xi <= 1.01; xi += 0.05) {
    const auto m = exact_gpwm_gev({0, 1, xi});
    worst = std::max(worst, std::abs(gpwm_to_gev_approx(m).xi - gpwm_to_gev_exact(m).xi));
  }
  CHECK(worst < 0.02);
  const auto m = exact_gpwm_gev({0, 1, 0.2});
  auto scaled = m;
  scaled.m1 *= 3;
  scaled.m2 *= 3;
  scaled.m3 *= 3;
  CHECK(gpwm_to_gev_approx(scaled).sigma == Approx(3 * gpwm_to_gev_approx(m).sigma).epsilon(1e-12));
  CHECK(gpwm_to_gev_approx(scaled).xi == Approx(gpwm_to_gev_approx(m).xi).epsilon(1e-12));
  // 2(m1 - m2)/(m1 - 9/4 m3) >= 0
  CHECK_THROWS_AS(gpwm_to_gev_approx(oracle::triple({1, 0.5, 0.2}, Family::Gpwm)), InfeasibleError);
}

TEST_CASE("to_gev dispatch and component") {
  const auto m = gumbel_pwm();
  CHECK(to_gev(GevMapKind::PwmExact, m).sigma == Approx(1.0).epsilon(1e-8));
  CHECK(component(GevParams{1, 2, 3}, Component::Sigma) == 2);
  CHECK(to_string(GevMapKind::GpwmApprox) != to_string(GevMapKind::PwmApprox));
}

TEST_CASE("shape gradient at the Gumbel point") {
  const auto m = gumbel_pwm();
  // f_xi = (2m2 - m1)/(3m3 - m1) - log2/log3
  const double a = 2 * m.m2 - m.m1, b = 3 * m.m3 - m.m1;
  const std::array<double, 3> grad_f = {(-b + a) / (b * b), 2 / b, -3 * a / (b * b)};
  const auto g = jacobian(GevMapKind::PwmApprox, Component::Xi, m);
  for (int i = 0; i < 3; ++i) CHECK(g[i] == Approx(-7.8590 * grad_f[i]).epsilon(1e-12));
  const auto s = jacobian(GevMapKind::PwmApprox, Component::Sigma, m);
  const auto fd = oracle::finite_difference([](const MomentTriple& t) { return pwm_to_gev_approx(t).sigma; }, m);
  for (int i = 0; i < 3; ++i) CHECK(s[i] == Approx(fd[i]).epsilon(1e-6));
}

TEST_CASE("closed-form gradients match finite differences") {
  Rng rng(404);
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    const GevParams p{uniform_open(rng) * 4 - 2, 0.2 + uniform_open(rng) * 3, uniform_open(rng) * 1.3 - 0.8};
    for (GevMapKind kind : {GevMapKind::PwmApprox, GevMapKind::GpwmApprox}) {
      const bool pwm = kind == GevMapKind::PwmApprox;
      const auto m = pwm ? exact_pwm_gev(p) : exact_gpwm_gev(p);
      for (Component c : {Component::Mu, Component::Sigma, Component::Xi}) {
        const auto g = jacobian(kind, c, m);
        const auto fd = oracle::finite_difference(
            [&](const MomentTriple& t) { return component(to_gev(kind, t), c); }, m);
        const double scale = std::max({std::abs(fd[0]), std::abs(fd[1]), std::abs(fd[2])});
        for (int k = 0; k < 3; ++k) CHECK(std::abs(g[k] - fd[k]) <= 1e-4 * scale);
        ++tested;
      }
    }
  }
  CHECK(tested == 600);
}

TEST_CASE("evaluate_approx bundles params and gradients") {
  const auto m = exact_pwm_gev({1, 2, 0.2});
  const auto ev = evaluate_approx(GevMapKind::PwmApprox, m);
  CHECK(ev.params == pwm_to_gev_approx(m));
  CHECK(ev.gradient(Component::Xi) == jacobian(GevMapKind::PwmApprox, Component::Xi, m));
  CHECK_THROWS_AS(evaluate_approx(GevMapKind::PwmExact, m), PreconditionError);
}
