#include "gamchain/sampling.hpp"

#include <cmath>

#include "gamchain/errors.hpp"

namespace gamchain {

namespace {

// Marsaglia-Tsang core for shape >= 1, rate 1.
double sample_gamma_shape(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!std::isfinite(shape) || shape <= 0.0) {
    throw domain_error("sample_gamma: shape must be positive and finite");
  }
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw domain_error("sample_gamma: rate must be positive and finite");
  }
  double draw;
  if (shape < 1.0) {
    draw = sample_gamma_shape(shape + 1.0, rng) *
           std::pow(rng.uniform_pos(), 1.0 / shape);
  } else {
    draw = sample_gamma_shape(shape, rng);
  }
  return draw / rate;
}

}  // namespace gamchain
