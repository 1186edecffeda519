#pragma once

namespace covbal {

// Standard normal distribution function and its complement, via erfc so both
// tails keep full relative accuracy.
double normal_cdf(double x);
double normal_sf(double x);

// P(Z1 > h, Z2 > k) for a standard bivariate normal with correlation rho.
// Gauss-Legendre quadrature of the Drezner-Wesolowsky orthant integral in the
// form refined by Genz (6, 12 or 20 nodes by |rho|, with a separate expansion
// for |rho| >= 0.925). Absolute error is well below 1e-7 (about 1e-15 in
// practice). Throws std::invalid_argument for |rho| > 1 or NaN input.
double bvn_upper(double h, double k, double rho);

// Equal thresholds: P(Z1 > z, Z2 > z) and P(Z1 < z, Z2 < z).
double bvn_upper(double z, double rho);
double bvn_lower(double z, double rho);

// Maps a computed probability into [0, 1]. Excursions larger than 1e-9 signal
// a numerical bug and throw NumericError.
double clamp_probability(double p);

}  // namespace covbal
