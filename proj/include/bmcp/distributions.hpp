#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "bmcp/random.hpp"
#include "bmcp/sample.hpp"

namespace bmcp {

// |xi| below this threshold selects the Gumbel (xi = 0) branch of the GEV
// and GPD formulas.
inline constexpr double kXiZeroThreshold = 1e-8;

// Location / scale / shape of the generalized extreme value law.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  // Throws PreconditionError unless sigma > 0 and all fields are finite.
  void validate() const;
  bool operator==(const GevParams&) const = default;
};

// Generalized Pareto law with location fixed at 0.
struct GpdParams {
  double sigma = 1.0;
  double xi = 0.0;
  void validate() const;
};

// Absolute value of a standard Student t with `df` degrees of freedom.
struct AbsStudentT {
  double df = 1.0;
  // |t| with 1/xi degrees of freedom lies in the GEV(xi) domain of attraction.
  static AbsStudentT from_xi(double xi);
};

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};

struct Exponential {
  double rate = 1.0;
};

// Any of the laws the simulations draw from.
using Distribution = std::variant<GevParams, GpdParams, AbsStudentT, Normal, Exponential>;

void validate(const Distribution& d);
std::string describe(const Distribution& d);

double gev_cdf(double x, const GevParams& p);
// Inverse of gev_cdf. Requires 0 < u < 1.
double gev_quantile(double u, const GevParams& p);

double cdf(const Distribution& d, double x);
double quantile(const Distribution& d, double u);
double draw(const Distribution& d, Rng& rng);

// n i.i.d. GEV draws by inverse transform. Requires n >= 1.
Sample sample_gev(std::size_t n, const GevParams& p, Rng& rng);

// Each value is the maximum of `block_size` fresh draws from `base`.
Sample sample_block_maxima(std::size_t n_blocks, std::size_t block_size, const Distribution& base,
                           Rng& rng);

}  // namespace bmcp
