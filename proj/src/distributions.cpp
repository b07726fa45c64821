#include "bmcp/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bmcp/errors.hpp"

namespace bmcp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_open_unit(double u) {
  if (!(u > 0.0 && u < 1.0)) throw PreconditionError("quantile: probability must lie in (0,1)");
}

double gpd_cdf(double x, const GpdParams& p) {
  if (x <= 0.0) return 0.0;
  const double z = x / p.sigma;
  if (std::abs(p.xi) < kXiZeroThreshold) return -std::expm1(-z);
  const double t = p.xi * z;
  if (t <= -1.0) return 1.0;  // beyond the finite upper endpoint (xi < 0)
  return -std::expm1(-std::log1p(t) / p.xi);
}

double gpd_quantile(double u, const GpdParams& p) {
  const double l = std::log1p(-u);
  if (std::abs(p.xi) < kXiZeroThreshold) return -p.sigma * l;
  return p.sigma * std::expm1(-p.xi * l) / p.xi;
}

}  // namespace

void GevParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(xi))
    throw PreconditionError("GEV parameters must be finite");
  if (!(sigma > 0.0)) throw PreconditionError("GEV scale must be positive");
}

void GpdParams::validate() const {
  if (!std::isfinite(sigma) || !std::isfinite(xi)) throw PreconditionError("GPD parameters must be finite");
  if (!(sigma > 0.0)) throw PreconditionError("GPD scale must be positive");
}

AbsStudentT AbsStudentT::from_xi(double xi) {
  if (!(xi > 0.0)) throw PreconditionError("|Student t| base requires xi > 0");
  return AbsStudentT{1.0 / xi};
}

void validate(const Distribution& d) {
  std::visit(Overloaded{
                 [](const GevParams& p) { p.validate(); },
                 [](const GpdParams& p) { p.validate(); },
                 [](const AbsStudentT& p) {
                   if (!(p.df > 0.0) || !std::isfinite(p.df))
                     throw PreconditionError("Student t degrees of freedom must be positive");
                 },
                 [](const Normal& p) {
                   if (!std::isfinite(p.mean) || !(p.sd > 0.0) || !std::isfinite(p.sd))
                     throw PreconditionError("normal law needs finite mean and positive sd");
                 },
                 [](const Exponential& p) {
                   if (!(p.rate > 0.0) || !std::isfinite(p.rate))
                     throw PreconditionError("exponential rate must be positive");
                 },
             },
             d);
}

std::string describe(const Distribution& d) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const GevParams& p) { os << "GEV(" << p.mu << "," << p.sigma << "," << p.xi << ")"; },
                 [&](const GpdParams& p) { os << "GPD(0," << p.sigma << "," << p.xi << ")"; },
                 [&](const AbsStudentT& p) { os << "|t(" << p.df << ")|"; },
                 [&](const Normal& p) { os << "N(" << p.mean << "," << p.sd << ")"; },
                 [&](const Exponential& p) { os << "Exp(" << p.rate << ")"; },
             },
             d);
  return os.str();
}

double gev_cdf(double x, const GevParams& p) {
  const double z = (x - p.mu) / p.sigma;
  if (std::abs(p.xi) < kXiZeroThreshold) return std::exp(-std::exp(-z));
  const double t = p.xi * z;
  if (t <= -1.0) return p.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(t) / p.xi));
}

double gev_quantile(double u, const GevParams& p) {
  require_open_unit(u);
  p.validate();
  const double y = -std::log(u);
  if (std::abs(p.xi) < kXiZeroThreshold) return p.mu - p.sigma * std::log(y);
  return p.mu + p.sigma * std::expm1(-p.xi * std::log(y)) / p.xi;
}

double cdf(const Distribution& d, double x) {
  return std::visit(
      Overloaded{
          [x](const GevParams& p) { return gev_cdf(x, p); },
          [x](const GpdParams& p) { return gpd_cdf(x, p); },
          [x](const AbsStudentT& p) {
            if (x <= 0.0) return 0.0;
            const boost::math::students_t_distribution<double> t(p.df);
            return 1.0 - 2.0 * boost::math::cdf(boost::math::complement(t, x));
          },
          [x](const Normal& p) { return boost::math::cdf(boost::math::normal_distribution<double>(p.mean, p.sd), x); },
          [x](const Exponential& p) { return x <= 0.0 ? 0.0 : -std::expm1(-p.rate * x); },
      },
      d);
}

double quantile(const Distribution& d, double u) {
  require_open_unit(u);
  return std::visit(
      Overloaded{
          [u](const GevParams& p) { return gev_quantile(u, p); },
          [u](const GpdParams& p) { return gpd_quantile(u, p); },
          [u](const AbsStudentT& p) {
            const boost::math::students_t_distribution<double> t(p.df);
            return boost::math::quantile(boost::math::complement(t, 0.5 * (1.0 - u)));
          },
          [u](const Normal& p) {
            return boost::math::quantile(boost::math::normal_distribution<double>(p.mean, p.sd), u);
          },
          [u](const Exponential& p) { return -std::log1p(-u) / p.rate; },
      },
      d);
}

double draw(const Distribution& d, Rng& rng) { return quantile(d, uniform_open(rng)); }

Sample sample_gev(std::size_t n, const GevParams& p, Rng& rng) {
  if (n == 0) throw PreconditionError("sample_gev: n must be at least 1");
  p.validate();
  std::vector<double> out(n);
  for (auto& v : out) v = gev_quantile(uniform_open(rng), p);
  return Sample(std::move(out));
}

Sample sample_block_maxima(std::size_t n_blocks, std::size_t block_size, const Distribution& base,
                           Rng& rng) {
  if (n_blocks == 0 || block_size == 0)
    throw PreconditionError("sample_block_maxima: n_blocks and block_size must be at least 1");
  validate(base);
  std::vector<double> out(n_blocks);
  for (auto& v : out) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < block_size; ++j) m = std::max(m, draw(base, rng));
    v = m;
  }
  return Sample(std::move(out));
}

}  // namespace bmcp
