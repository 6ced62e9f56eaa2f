// Residual-based goodness-of-fit: draw one posterior precision per time step,
// standardize the returns with it, and test the result against N(0,1) with a
// Kolmogorov-Smirnov test.
#pragma once

#include <cstddef>
#include <vector>

#include "gamchain/mc.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/types.hpp"

namespace gamchain {

// e_t = dy_t * sqrt(u_t^s), u_t^s ~ Ga(a_t, b_t) (one draw per node).
std::vector<double> draw_residuals(const GammaPosterior& posterior,
                                   const ReturnSeries& series, Rng& rng);

// u_t^s = exp(x_t^s), x_t^s ~ N(mu_t, sigma2_t).
std::vector<double> draw_residuals(const GaussianPosterior& posterior,
                                   const ReturnSeries& series, Rng& rng);

// u_t^s from a uniformly chosen smoothing trajectory per time step;
// trajectory values are exponentiated for the lognormal kind.
std::vector<double> draw_residuals(const Trajectories& trajectories,
                                   const ReturnSeries& series, Rng& rng);

// u_t^s = true simulated latent precision (calibration oracle).
std::vector<double> exact_residuals(const LatentPath& latents,
                                    const ReturnSeries& series);

// u_t^s = 1: the unstandardized returns themselves.
std::vector<double> raw_residuals(const ReturnSeries& series);

// Two-sided KS test of the sample against the standard normal; asymptotic
// Kolmogorov p-value at sqrt(n) * D. Fills statistic/p/passed/count; the
// caller labels instrument and engine.
ResidualReport ks_test_standard_normal(const std::vector<double>& sample,
                                       double alpha = 0.05);

// Fraction of reports with passed == true.
double residual_pass_rate(const std::vector<ResidualReport>& reports);

// Return moments plus the moments of log squared-return increments
// (zero returns are skipped before differencing). Population moments;
// kurtosis is non-excess.
SeriesStats series_stats(const ReturnSeries& series);

}  // namespace gamchain
