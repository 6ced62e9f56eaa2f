#include "gamchain/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gamchain/errors.hpp"

namespace gamchain {

namespace {

// B_2, B_4, ..., B_16.
constexpr double kBernoulli[] = {
    1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0,
};
constexpr int kBernoulliTerms = 8;
constexpr double kShiftTarget = 10.0;

void check_positive_finite(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw domain_error(std::string(fn) + ": argument must be positive and finite");
  }
}

// Asymptotic series at large x. psi0(x) ~ ln x - 1/(2x) - sum B_2k/(2k x^2k).
double digamma_series(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double power = inv2;
  double sum = 0.0;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    sum += kBernoulli[k - 1] / (2.0 * k) * power;
    power *= inv2;
  }
  return std::log(x) - 0.5 * inv - sum;
}

// psi1(x) ~ 1/x + 1/(2x^2) + sum B_2k / x^(2k+1).
double trigamma_series(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double power = inv2 * inv;
  double sum = 0.0;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    sum += kBernoulli[k - 1] * power;
    power *= inv2;
  }
  return inv + 0.5 * inv2 + sum;
}

// psi3(x) ~ 2/x^3 + 3/x^4 + sum B_2k (2k+1)(2k+2) / x^(2k+3).
double tetragamma3_series(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double inv3 = inv2 * inv;
  double power = inv3 * inv2;
  double sum = 0.0;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    sum += kBernoulli[k - 1] * (2.0 * k + 1.0) * (2.0 * k + 2.0) * power;
    power *= inv2;
  }
  return 2.0 * inv3 + 3.0 * inv2 * inv2 + sum;
}

}  // namespace

double log_gamma(double x) {
  check_positive_finite(x, "log_gamma");
  return std::lgamma(x);
}

double polygamma(int n, double x) {
  check_positive_finite(x, "polygamma");
  if (n != 0 && n != 1 && n != 3) {
    throw domain_error("polygamma: order must be 0, 1, or 3");
  }
  // Upward recurrence: psi^(n)(x) = psi^(n)(x+1) - (-1)^n n! / x^(n+1).
  double shift = 0.0;
  while (x < kShiftTarget) {
    double p = x;  // x^(n+1) via small integer powers
    for (int j = 0; j < n; ++j) p *= x;
    shift += 1.0 / p;
    x += 1.0;
  }
  switch (n) {
    case 0:
      return digamma_series(x) - shift;
    case 1:
      return trigamma_series(x) + shift;
    default:
      return tetragamma3_series(x) + 6.0 * shift;
  }
}

double digamma(double x) { return polygamma(0, x); }

double trigamma(double x) { return polygamma(1, x); }

double lambert_w0(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw domain_error("lambert_w0: argument must be finite and >= 0");
  }
  if (x == 0.0) return 0.0;
  // log1p overshoots for large x and w e^w overflows; the asymptotic guess
  // L - log L starts slightly below the root, where the iteration is safe.
  const double lx = std::log(x);
  double w = lx > 2.0 ? lx - std::log(lx) : std::log1p(x);
  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    // Divide before multiplying: (w + 2) * f alone can overflow near DBL_MAX.
    const double denom = ew * (w + 1.0) - (w + 2.0) * (f / (2.0 * w + 2.0));
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) return w;
  }
  throw numeric_error("lambert_w0: Halley iteration did not converge");
}

double lambert_w0_log(double log_x) {
  if (!std::isfinite(log_x)) {
    throw domain_error("lambert_w0_log: argument must be finite");
  }
  if (log_x <= 600.0) return lambert_w0(std::exp(log_x));
  // For w >= 1 the defining equation reads w + log w = log x; Newton on it
  // avoids forming e^w.
  double w = log_x - std::log(log_x);
  for (int iter = 0; iter < 50; ++iter) {
    const double step = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) return w;
  }
  throw numeric_error("lambert_w0_log: Newton iteration did not converge");
}

double standard_normal_cdf(double x) {
  if (std::isnan(x)) throw domain_error("standard_normal_cdf: NaN argument");
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw domain_error("standard_normal_quantile: p must be in (0, 1)");
  }
  // Rational approximation in three regions (central plus two tails).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  // Work on the lower half; 1 - p is exact for p in [0.5, 1).
  if (p > 0.5) return -standard_normal_quantile(1.0 - p);
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // One Halley step against the forward CDF; x <= 0 keeps the erfc-based CDF
  // relatively accurate, and the log-space product survives the deep tail
  // where exp(x^2/2) alone would overflow.
  const double err = standard_normal_cdf(x) - p;
  if (err == 0.0 || !std::isfinite(x)) return x;
  const double log_density = -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
  const double u = std::copysign(std::exp(std::log(std::abs(err)) - log_density), err);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace gamchain
