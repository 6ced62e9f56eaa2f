// Scalar special functions used across the estimators: log-gamma, polygamma
// of orders 0/1/3, the principal Lambert W branch, and the standard normal
// CDF and quantile.
#pragma once

namespace gamchain {

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Polygamma psi^(n)(x) for n in {0, 1, 3} and x > 0. Computed by an upward
// recurrence shift to x >= 10 followed by the Bernoulli asymptotic series.
double polygamma(int n, double x);

// Convenience wrappers for the two most used orders.
double digamma(double x);
double trigamma(double x);

// Principal branch W0(x) for x >= 0: the w >= 0 solution of w e^w = x.
// Halley iteration from the ln(1+x) initial guess, tolerance 1e-14, at most
// 50 iterations.
double lambert_w0(double x);

// W0(exp(log_x)); stays finite when exp(log_x) itself would overflow by
// solving w + log w = log_x in log space for large arguments.
double lambert_w0_log(double log_x);

// Standard normal CDF via erfc; absolute error well below 1e-12.
double standard_normal_cdf(double x);

// Inverse standard normal CDF for p in (0, 1); rational initial estimate
// refined by one Halley step against standard_normal_cdf.
double standard_normal_quantile(double p);

}  // namespace gamchain
