// Gaussian variational estimation for the lognormal chain: per-node mode
// updates via the Lambert W function, Laplace curvature variances, and the
// closed-form step-variance M-step.
#pragma once

#include <cstddef>
#include <vector>

#include "gamchain/types.hpp"

namespace gamchain {

// mu_t = log(1 / max(dy_t^2, floor)), sigma2_t = 1.
GaussianPosterior init_gaussian_posterior(const ReturnSeries& series);

// Coordinate update of (mu_t, sigma2_t). Interior nodes:
//   c = S^2/4 + (mu_{t-1} + mu_{t+1})/2,
//   mu_t <- c - W0(S^2/4 * dy_t^2 * e^c),
//   sigma2_t <- 2 / (e^{mu_t} dy_t^2 + 4/S^2);
// boundary nodes use the single neighbor with S^2/2 in place of S^2/4.
// damping blends the new mode with the old one (1 = full step).
void laplace_update(GaussianPosterior& posterior, const ReturnSeries& series,
                    const LogNParams& params, std::size_t t, double damping = 1.0);

// One forward sweep over all nodes; allocation-free.
void laplace_sweep_into(GaussianPosterior& posterior,
                        const std::vector<double>& floored_sq,
                        const LogNParams& params, double damping = 1.0);

// S^2 <- (1/T) sum_{t>=2} ((mu_t - mu_{t-1})^2 + sigma2_t + sigma2_{t-1}),
// floored at 1e-12.
LogNParams logn_vi_mstep(const GaussianPosterior& posterior, std::size_t length);

struct LaplaceFitConfig {
  double tol = 1e-6;  // relative |dS^2| stopping rule
  int max_rounds = 1000;
  int sweeps = 1;
  double s2_0 = 1.0;
  double damping = 1.0;
};

struct LaplaceFitResult {
  FitReport report;
  GaussianPosterior posterior;
};

LaplaceFitResult fit_logn_vi(const ReturnSeries& series,
                             const LaplaceFitConfig& config = {});

}  // namespace gamchain
