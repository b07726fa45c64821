#include "bmcp/gev_maps.hpp"

#include <cmath>
#include <optional>

#include "bmcp/errors.hpp"
#include "shape_series.hpp"

namespace bmcp {
namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const double kLog15 = std::log(1.5);

// xi = f(x) = -7.8590 x - 2.9554 x^2, x = (2m2 - m1)/(3m3 - m1) - log 2 / log 3
constexpr double kPwmLinear = -7.8590;
constexpr double kPwmQuadratic = -2.9554;

// xi = f(x) = (1.442853 - (-x)^0.4054651) / 0.1183375, x = 2(m1 - m2)/(m1 - 9/4 m3)
constexpr double kGpwmOffset = 1.442853;
constexpr double kGpwmPower = 0.4054651;
constexpr double kGpwmScale = 0.1183375;

// Bisection for an increasing function; nullopt when [lo, hi] does not
// bracket the target.
template <class Fn>
std::optional<double> bisect_increasing(Fn fn, double target, double lo, double hi) {
  double flo = fn(lo) - target;
  const double fhi = fn(hi) - target;
  if (!std::isfinite(flo) || !std::isfinite(fhi)) return std::nullopt;
  if (flo > 0.0 || fhi < 0.0) return std::nullopt;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > kXiSolveTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid) - target;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_family(const MomentTriple& m, Family f, const char* who) {
  if (m.family != f)
    throw PreconditionError(std::string(who) + ": expects " + to_string(f) + " moments, got " + to_string(m.family));
}

// sigma and mu of the Pwm system given xi, with the xi-derivatives the
// chain rule needs.
struct PwmBackSubstitution {
  double sigma, mu, dsigma_dxi, d1, d1_slope;
};

PwmBackSubstitution pwm_back_substitute(double xi, double a, double m1) {
  // sigma = a / (Gamma(1-xi) e2(xi)), mu = m1 - sigma (Gamma(1-xi) - 1)/xi
  const auto e2 = detail::expm1_ratio(xi, kLog2, 0);
  const auto d1 = detail::expm1_ratio(xi, 0.0, 1);
  const double g1 = gamma_fn(1.0 - xi);
  const double dg1 = -g1 * digamma(1.0 - xi);
  const double den = g1 * e2.value;
  const double sigma = a / den;
  const double dsigma = -a * (dg1 * e2.value + g1 * e2.slope) / (den * den);
  return {sigma, m1 - sigma * d1.value, dsigma, d1.value, d1.slope};
}

struct GpwmBackSubstitution {
  double sigma, mu, dsigma_dxi, k, k_slope, dsigma_dp;
};

GpwmBackSubstitution gpwm_back_substitute(double xi, double p, double m1) {
  // sigma = 8 p / (2^xi Gamma(2-xi)), mu = 4 m1 - sigma (2^xi Gamma(2-xi) - 1)/xi
  const auto k = detail::expm1_ratio(xi, kLog2, 2);
  const double g2 = std::exp(xi * kLog2) * gamma_fn(2.0 - xi);
  const double sigma = 8.0 * p / g2;
  const double dsigma = -sigma * (kLog2 - digamma(2.0 - xi));
  return {sigma, 4.0 * m1 - sigma * k.value, dsigma, k.value, k.slope, 8.0 / g2};
}

double pwm_ratio(double xi) {
  return detail::expm1_ratio(xi, kLog3, 0).value / detail::expm1_ratio(xi, kLog2, 0).value;
}

double gpwm_ratio(double xi) { return -1.0 / detail::expm1_ratio(xi, kLog15, 0).value; }

std::optional<GevParams> try_gpwm_exact(const MomentTriple& m) {
  const double p = m.m1 - m.m2;
  const double q = m.m1 - 2.25 * m.m3;
  const double target = 2.0 * p / q;
  if (!std::isfinite(target)) return std::nullopt;
  const auto xi = bisect_increasing(gpwm_ratio, target, kGpwmXiLower, kGpwmXiUpper);
  if (!xi) return std::nullopt;
  const auto back = gpwm_back_substitute(*xi, p, m.m1);
  if (!(back.sigma > 0.0) || !std::isfinite(back.sigma) || !std::isfinite(back.mu)) return std::nullopt;
  return GevParams{back.mu, back.sigma, *xi};
}

}  // namespace

std::string to_string(GevMapKind k) {
  switch (k) {
    case GevMapKind::PwmExact: return "pwm_exact";
    case GevMapKind::PwmApprox: return "pwm_approx";
    case GevMapKind::GpwmExact: return "gpwm_exact";
    case GevMapKind::GpwmApprox: return "gpwm_approx";
  }
  return "?";
}

std::string to_string(Component c) {
  switch (c) {
    case Component::Mu: return "mu";
    case Component::Sigma: return "sigma";
    case Component::Xi: return "xi";
  }
  return "?";
}

double component(const GevParams& p, Component c) {
  return c == Component::Mu ? p.mu : (c == Component::Sigma ? p.sigma : p.xi);
}

GevParams pwm_to_gev_exact(const MomentTriple& m) {
  require_family(m, Family::Pwm, "pwm_to_gev_exact");
  if (auto why = dxi_violation(m)) throw InfeasibleError("moments outside D_xi: " + *why);
  const double a = 2.0 * m.m2 - m.m1;
  const double target = (3.0 * m.m3 - m.m1) / a;
  // The ratio increases from 1 (xi -> -inf) to 2 (xi -> 1); widen the
  // bracket when the root lies outside the default one.
  double lo = kPwmXiLower;
  while (pwm_ratio(lo) > target && lo > -1e3) lo *= 2.0;
  double hi = kPwmXiUpper;
  if (pwm_ratio(hi) < target) hi = 1.0 - 1e-12;
  const auto xi = bisect_increasing(pwm_ratio, target, lo, hi);
  if (!xi) throw SolverError("pwm_to_gev_exact: shape equation has no root in the search bracket");
  const auto back = pwm_back_substitute(*xi, a, m.m1);
  return {back.mu, back.sigma, *xi};
}

GevParams gpwm_to_gev_exact(const MomentTriple& m) {
  require_family(m, Family::Gpwm, "gpwm_to_gev_exact");
  if (auto p = try_gpwm_exact(m)) return *p;
  throw SolverError("gpwm_to_gev_exact: no admissible root with xi in (-5, 2)");
}

bool in_dh(const MomentTriple& m) {
  if (m.family != Family::Gpwm) throw PreconditionError("in_dh: expects gpwm moments");
  return try_gpwm_exact(m).has_value();
}

ApproxEvaluation evaluate_approx(GevMapKind kind, const MomentTriple& m) {
  ApproxEvaluation out;
  if (kind == GevMapKind::PwmApprox) {
    require_family(m, Family::Pwm, "pwm_to_gev_approx");
    if (auto why = dxi_violation(m)) throw InfeasibleError("moments outside D_xi: " + *why);
    const double a = 2.0 * m.m2 - m.m1;
    const double b = 3.0 * m.m3 - m.m1;
    const double x = a / b - kLog2 / kLog3;
    const Gradient dx = {(a - b) / (b * b), 2.0 / b, -3.0 * a / (b * b)};
    const double xi = kPwmLinear * x + kPwmQuadratic * x * x;
    const double dxi_dx = kPwmLinear + 2.0 * kPwmQuadratic * x;
    const auto back = pwm_back_substitute(xi, a, m.m1);
    const Gradient da = {-1.0, 2.0, 0.0};
    const double inv_den = back.sigma / a;
    for (int i = 0; i < 3; ++i) {
      out.d_xi[i] = dxi_dx * dx[i];
      out.d_sigma[i] = inv_den * da[i] + back.dsigma_dxi * out.d_xi[i];
      out.d_mu[i] = (i == 0 ? 1.0 : 0.0) - back.d1 * out.d_sigma[i] - back.sigma * back.d1_slope * out.d_xi[i];
    }
    out.params = {back.mu, back.sigma, xi};
    return out;
  }
  if (kind == GevMapKind::GpwmApprox) {
    require_family(m, Family::Gpwm, "gpwm_to_gev_approx");
    const double p = m.m1 - m.m2;
    const double q = m.m1 - 2.25 * m.m3;
    const double x = 2.0 * p / q;
    if (!(x < 0.0) || !std::isfinite(x))
      throw InfeasibleError("gpwm_to_gev_approx: 2(m1 - m2)/(m1 - 9/4 m3) must be negative");
    const Gradient dp = {1.0, -1.0, 0.0};
    const Gradient dq = {1.0, 0.0, -2.25};
    const double xi = (kGpwmOffset - std::pow(-x, kGpwmPower)) / kGpwmScale;
    const double dxi_dx = kGpwmPower * std::pow(-x, kGpwmPower - 1.0) / kGpwmScale;
    GpwmBackSubstitution back{};
    try {
      back = gpwm_back_substitute(xi, p, m.m1);
    } catch (const PreconditionError&) {
      throw InfeasibleError("gpwm_to_gev_approx: shape estimate hits a pole of Gamma(2 - xi)");
    }
    for (int i = 0; i < 3; ++i) {
      const double dxi = 2.0 * (dp[i] * q - p * dq[i]) / (q * q);
      out.d_xi[i] = dxi_dx * dxi;
      out.d_sigma[i] = back.dsigma_dp * dp[i] + back.dsigma_dxi * out.d_xi[i];
      out.d_mu[i] = (i == 0 ? 4.0 : 0.0) - back.k * out.d_sigma[i] - back.sigma * back.k_slope * out.d_xi[i];
    }
    out.params = {back.mu, back.sigma, xi};
    return out;
  }
  throw PreconditionError("evaluate_approx: only the approximate maps have closed-form gradients");
}

GevParams pwm_to_gev_approx(const MomentTriple& m) { return evaluate_approx(GevMapKind::PwmApprox, m).params; }

GevParams gpwm_to_gev_approx(const MomentTriple& m) { return evaluate_approx(GevMapKind::GpwmApprox, m).params; }

GevParams to_gev(GevMapKind kind, const MomentTriple& m) {
  switch (kind) {
    case GevMapKind::PwmExact: return pwm_to_gev_exact(m);
    case GevMapKind::PwmApprox: return pwm_to_gev_approx(m);
    case GevMapKind::GpwmExact: return gpwm_to_gev_exact(m);
    case GevMapKind::GpwmApprox: return gpwm_to_gev_approx(m);
  }
  throw PreconditionError("to_gev: unknown map");
}

Gradient jacobian(GevMapKind kind, Component c, const MomentTriple& m) { return evaluate_approx(kind, m).gradient(c); }

}  // namespace bmcp
