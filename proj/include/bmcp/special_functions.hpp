#pragma once

namespace bmcp {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Gamma function (Lanczos approximation, reflection below 1/2).
// Throws PreconditionError at the poles 0, -1, -2, ...
double gamma_fn(double x);

// Digamma psi = Gamma'/Gamma. Same poles as gamma_fn.
double digamma(double x);

// C.d.f. of the supremum of the absolute value of a standard Brownian
// bridge: 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2). Returns 0 for x <= 0.
// Below x = 1 the equivalent theta-function series
// sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2)) is summed instead,
// since the alternating series converges slowly there.
double kolmogorov_cdf(double x);

// Upper tail 1 - kolmogorov_cdf(x), computed without cancellation for large x.
double kolmogorov_sf(double x);

}  // namespace bmcp
