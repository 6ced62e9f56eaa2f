// Gamma variate generation. The sampler draws for the shape only and divides
// by the rate, so for a fixed seed the draws for rate b equal the draws for
// rate 1 divided by b.
#pragma once

#include "gamchain/rng.hpp"

namespace gamchain {

// Ga(shape, rate) with mean shape/rate. Squeeze-accept scheme for
// shape >= 1; for shape < 1 a boosted draw from shape+1 is scaled by
// U^(1/shape).
double sample_gamma(double shape, double rate, Rng& rng);

}  // namespace gamchain
