#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bmcp/distributions.hpp"
#include "bmcp/sample.hpp"

namespace bmcp {

// Weight functions nu_1, nu_2, nu_3 of the moments beta_i = E[X nu_i(F(X))].
//   Pwm : 1, x, x^2
//   Gpwm: -x log x, x (log x)^2, -x^2 log x
enum class Family { Pwm, Gpwm };

enum class Estimator { BetaHat, BHat, Exact };

std::string to_string(Family f);
std::string to_string(Estimator e);

// i in {1,2,3}. Gpwm weights need x > 0.
double weight(Family f, int i, double x);
double weight_derivative(Family f, int i, double x);

struct MomentTriple {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  Family family = Family::Pwm;
  Estimator estimator = Estimator::Exact;
  double gamma = 0.0;  // plotting-position constant; meaningful for BetaHat only

  std::array<double, 3> values() const { return {m1, m2, m3}; }
  double operator[](int i) const { return i == 0 ? m1 : (i == 1 ? m2 : m3); }
};

// (#{X_j <= x} + gamma) / n. Not clamped to [0,1].
double ecdf(std::span<const double> sample, double x, double gamma);

// n^{-1} sum_j X_j nu_i(F(X_j)) with F the ecdf above. Throws
// PreconditionError for Gpwm when some ecdf value is not positive.
MomentTriple beta_hat(std::span<const double> sample, Family family, double gamma);

// Unbiased order-statistic estimators of the Pwm moments. Requires n >= 3.
MomentTriple b_hat(std::span<const double> sample);

// Population Pwm moments of a GEV, via beta_i = E[max of i copies] / i.
// Requires xi < 1.
MomentTriple exact_pwm_gev(const GevParams& p);

// Population Gpwm moments of a GEV, from the closed-form moment relations.
// Requires xi < 2.
MomentTriple exact_gpwm_gev(const GevParams& p);

// Membership of the open convex set
//   2 m2 - m1 > 0,  3 m3 - 2 m2 > 0,  -m1 + 4 m2 - 3 m3 > 0.
bool in_dxi(const MomentTriple& m);
// First violated inequality, spelled out, or nullopt inside the set.
std::optional<std::string> dxi_violation(const MomentTriple& m);

// True iff the Gpwm moment system solves with xi < 2, sigma > 0 and finite mu.
bool in_dh(const MomentTriple& m);

// Moments of every prefix X_1..X_k and every suffix X_{k+1}..X_n.
// prefix[k] and suffix[k] for k = 0..n; entries whose subsample is below the
// estimator's minimum size (or where a Gpwm weight is undefined) are empty.
struct PrefixSuffixMoments {
  std::vector<std::optional<MomentTriple>> prefix;
  std::vector<std::optional<MomentTriple>> suffix;
};

enum class MomentEngine {
  Naive,        // re-estimates every subsample from scratch (reference)
  Incremental,  // running order-statistic sums
};

// Requires n >= 2. `family` and `gamma` are ignored for BHat.
PrefixSuffixMoments prefix_suffix_moments(std::span<const double> sample, Estimator estimator,
                                          Family family, double gamma,
                                          MomentEngine engine = MomentEngine::Incremental);

// Smallest subsample on which the estimator is defined.
std::size_t min_subsample_size(Estimator estimator);

}  // namespace bmcp
