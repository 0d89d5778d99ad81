#pragma once

namespace cvqrc {

// Error function, |error| <= 1e-12 on finite arguments.
double erf(double x);

// Standard normal CDF, Phi(z) = (1 + erf(z/sqrt(2)))/2, evaluated through erfc
// for accuracy in the lower tail.
double std_normal_cdf(double z);

// P(X <= h, Y <= k) for standard bivariate normal variables with correlation
// rho. Absolute error <= 1e-10 for |rho| <= 0.99; the limits rho -> +-1 reduce
// to the comonotone / antimonotone copulas. Throws std::invalid_argument when
// |rho| > 1 beyond numerical slack.
double bivariate_normal_cdf(double h, double k, double rho);

// Normalized Legendre polynomial sqrt(2d+1) * P_d(s), orthonormal on [-1,1]
// under the uniform probability measure. Three-term recurrence; d is capped at
// max_legendre_degree to catch runaway configuration values.
inline constexpr int max_legendre_degree = 30;
double normalized_legendre(int d, double s);

}  // namespace cvqrc
