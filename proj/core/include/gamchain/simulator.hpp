// Synthetic data generation for both latent chains. The precision recursion
// runs in log space; a 100-step burn-in from the supplied starting precision
// is discarded before recording.
//
// The gamma-chain latent log-precision is a random walk, so raw u leaves
// double range for very long paths; the increments API below draws from the
// exact same stationary increment law without ever forming u and is the right
// tool for moment checks at large sample counts.
#pragma once

#include <cstddef>
#include <vector>

#include "gamchain/rng.hpp"
#include "gamchain/types.hpp"

namespace gamchain {

// v_t ~ Ga(A, u_t), u_{t+1} ~ Ga(A, v_t), dy_t ~ N(0, 1/u_t).
SyntheticDataset simulate_gamchain(const GamChainParams& params, std::size_t length,
                                   double u0, Rng& rng);

// log u_t = log u_{t-1} + S xi_t, dy_t ~ N(0, 1/u_t).
SyntheticDataset simulate_logn(const LogNParams& params, std::size_t length,
                               double u0, Rng& rng);

// iid draws of w = log u_{t+1} - log u_t = log h - log g with h, g ~ Ga(A, 1).
std::vector<double> simulate_gamchain_increments(const GamChainParams& params,
                                                 std::size_t count, Rng& rng);

}  // namespace gamchain
