#include "gamchain/model.hpp"

#include <cmath>
#include <numbers>

#include "gamchain/errors.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

double increment_density(double w, const GamChainParams& params) {
  params.validate();
  if (!std::isfinite(w)) throw domain_error("increment_density: non-finite w");
  const double a = params.shape_a;
  // A w - 2A log(1 + e^w) == -A|w| - 2A log(1 + e^{-|w|}) by symmetry.
  const double aw = std::abs(w);
  const double log_density = log_gamma(2.0 * a) - 2.0 * log_gamma(a) - a * aw -
                             2.0 * a * std::log1p(std::exp(-aw));
  return std::exp(log_density);
}

double naive_increment_density(double w, double u_prev, const GamChainParams& params) {
  params.validate();
  if (!std::isfinite(w)) throw domain_error("naive_increment_density: non-finite w");
  if (!std::isfinite(u_prev) || u_prev <= 0.0) {
    throw domain_error("naive_increment_density: u_prev must be positive");
  }
  const double a = params.shape_a;
  const double log_scale = w + 2.0 * std::log(u_prev);
  const double log_density = a * log_scale - std::exp(log_scale) - log_gamma(a);
  return std::exp(log_density);
}

double increment_mgf(double lambda, const GamChainParams& params) {
  params.validate();
  const double a = params.shape_a;
  if (!(std::abs(lambda) < a)) {
    throw domain_error("increment_mgf: requires |lambda| < A");
  }
  return std::exp(log_gamma(a - lambda) + log_gamma(a + lambda) - 2.0 * log_gamma(a));
}

double increment_variance(const GamChainParams& params) {
  params.validate();
  return 2.0 * polygamma(1, params.shape_a);
}

double increment_kurtosis(const GamChainParams& params) {
  params.validate();
  const double t = polygamma(1, params.shape_a);
  return 3.0 + polygamma(3, params.shape_a) / (2.0 * t * t);
}

double marginal_return_density(double y, double b_rate, const GamChainParams& params) {
  params.validate();
  if (!std::isfinite(y)) throw domain_error("marginal_return_density: non-finite y");
  if (!std::isfinite(b_rate) || b_rate <= 0.0) {
    throw domain_error("marginal_return_density: rate must be positive");
  }
  const double a = params.shape_a;
  const double log_density = a * std::log(2.0 * b_rate) -
                             (a + 0.5) * std::log(2.0 * b_rate + y * y) +
                             log_gamma(a + 0.5) - 0.5 * std::log(std::numbers::pi) -
                             log_gamma(a);
  return std::exp(log_density);
}

double marginal_return_kurtosis(const GamChainParams& params) {
  params.validate();
  const double a = params.shape_a;
  if (a <= 2.0) {
    throw domain_error("marginal_return_kurtosis: needs A > 2 for a finite fourth moment");
  }
  return 3.0 * std::exp(log_gamma(a - 2.0) + log_gamma(a) - 2.0 * log_gamma(a - 1.0));
}

}  // namespace gamchain
