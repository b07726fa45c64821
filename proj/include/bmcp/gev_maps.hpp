#pragma once

#include <array>
#include <string>

#include "bmcp/distributions.hpp"
#include "bmcp/moments.hpp"

namespace bmcp {

// Maps from a moment triple to GEV parameters.
//   PwmExact   : root of (3^xi - 1)/(2^xi - 1) = (3m3 - m1)/(2m2 - m1), xi < 1
//   PwmApprox  : closed-form polynomial approximation of the above
//   GpwmExact  : root of xi / (1 - 1.5^xi) = 2(m1 - m2)/(m1 - 9/4 m3), xi < 2
//   GpwmApprox : closed-form power approximation of the above
enum class GevMapKind { PwmExact, PwmApprox, GpwmExact, GpwmApprox };

enum class Component { Mu, Sigma, Xi };

std::string to_string(GevMapKind k);
std::string to_string(Component c);

// Root-finding brackets for the exact maps.
inline constexpr double kPwmXiLower = -5.0;
inline constexpr double kPwmXiUpper = 0.999999;
inline constexpr double kGpwmXiLower = -5.0;
inline constexpr double kGpwmXiUpper = 1.999999;
inline constexpr double kXiSolveTolerance = 1e-12;

// Throws InfeasibleError when m is outside D_xi.
GevParams pwm_to_gev_exact(const MomentTriple& m);
GevParams pwm_to_gev_approx(const MomentTriple& m);

// Throws PreconditionError for a non-Gpwm triple and SolverError when the
// shape equation has no root in (kGpwmXiLower, kGpwmXiUpper) or the solved
// scale/location are inadmissible.
GevParams gpwm_to_gev_exact(const MomentTriple& m);
// Throws InfeasibleError unless 2(m1 - m2)/(m1 - 9/4 m3) < 0.
GevParams gpwm_to_gev_approx(const MomentTriple& m);

GevParams to_gev(GevMapKind kind, const MomentTriple& m);

double component(const GevParams& p, Component c);

using Gradient = std::array<double, 3>;

struct ApproxEvaluation {
  GevParams params;
  Gradient d_mu{};
  Gradient d_sigma{};
  Gradient d_xi{};

  const Gradient& gradient(Component c) const {
    return c == Component::Mu ? d_mu : (c == Component::Sigma ? d_sigma : d_xi);
  }
};

// Parameters of an approximate map together with their closed-form
// gradients with respect to (m1, m2, m3). `kind` must be PwmApprox or
// GpwmApprox.
ApproxEvaluation evaluate_approx(GevMapKind kind, const MomentTriple& m);

Gradient jacobian(GevMapKind kind, Component c, const MomentTriple& m);

}  // namespace bmcp
