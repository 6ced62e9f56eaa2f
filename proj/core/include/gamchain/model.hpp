// Closed-form distributions implied by the gamma-chain volatility model:
// the stationary law of log-precision increments, its MGF and moments, and
// the heavy-tailed marginal return density under a fixed dummy-node rate.
#pragma once

#include "gamchain/types.hpp"

namespace gamchain {

// Density of w = log u_t - log u_{t-1}:
//   Gamma(2A) / Gamma(A)^2 * e^{A w} (1 + e^w)^{-2A}.
// Symmetric in w; evaluated in log space so large |w| stays finite.
double increment_density(double w, const GamChainParams& params);

// Density of w when the previous precision is conditioned to u_prev and the
// dummy node is collapsed at its conditional scale:
//   exp(-e^w u_prev^2) (e^w u_prev^2)^A / Gamma(A).
double naive_increment_density(double w, double u_prev, const GamChainParams& params);

// E[e^{lambda w}] = Gamma(A - lambda) Gamma(A + lambda) / Gamma(A)^2 for
// |lambda| < A.
double increment_mgf(double lambda, const GamChainParams& params);

// Var[w] = 2 psi1(A).
double increment_variance(const GamChainParams& params);

// Non-excess kurtosis 3 + psi3(A) / (2 psi1(A)^2); lies strictly in (3, 6).
double increment_kurtosis(const GamChainParams& params);

// Marginal return density when u ~ Ga(A, B) is integrated out:
//   2^A B^A (2B + y^2)^{-(A + 1/2)} Gamma(A + 1/2) / (sqrt(pi) Gamma(A)).
double marginal_return_density(double y, double b_rate, const GamChainParams& params);

// Non-excess kurtosis of the marginal return, 3 Gamma(A-2) Gamma(A) /
// Gamma(A-1)^2; requires A > 2 for the fourth moment to exist.
double marginal_return_kurtosis(const GamChainParams& params);

}  // namespace gamchain
