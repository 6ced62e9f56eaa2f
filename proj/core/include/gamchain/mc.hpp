// Sequential Monte Carlo engines: bootstrap particle filters with systematic
// resampling and backward trajectory simulation, for the gamma chain (states
// u_t with dummy nodes v_t) and the lognormal chain (states log u_t).
#pragma once

#include <cstddef>
#include <vector>

#include "gamchain/rng.hpp"
#include "gamchain/types.hpp"
#include "gamchain/vi.hpp"

namespace gamchain {

// Backward-sampled smoothing trajectories: count x length row-major. values
// hold u for the gamma chain and log u for the lognormal chain; v_values
// (gamma chain only) hold the count x (length-1) dummy nodes.
struct Trajectories {
  std::size_t count = 0;
  std::size_t length = 0;
  std::string kind;  // "gam" (values are u) or "logn" (values are log u)
  std::vector<double> values;
  std::vector<double> v_values;
};

// Reusable buffers so repeated E-steps allocate nothing once warm.
struct McScratch {
  std::vector<double> log_values, log_weights;
  std::vector<double> log_v_values, log_v_weights;
  std::vector<double> logits, row, log_weight_accum;
};

// --- gamma chain -----------------------------------------------------------

// Bootstrap filter: u_1 from Ga(1/2, dy_1^2/2) with uniform weights, prior
// proposals v_t ~ Ga(A, u_t), u_{t+1} ~ Ga(A, v_t), weights multiplied by
// N(dy_t; 0, 1/u_t), systematic resampling when ESS < N/2. Rows are stored
// after resampling; each v_t row carries the time-t filtered weights.
ParticleCloud forward_filter_gam(const ReturnSeries& series,
                                 const GamChainParams& params, int particles,
                                 Rng& rng);

// Backward simulation: from the final filtered weights, repeatedly reselect
// dummy and state particles against the gamma transition densities. Returns
// `trajectories` sampled paths (0 means one per filter particle).
Trajectories backward_trajectories_gam(const ParticleCloud& cloud,
                                       const GamChainParams& params, Rng& rng,
                                       int trajectories = 0);

// Smoothed expectation tables (E[u], E[log u], E[log v]) from backward
// trajectories; the EM shape update consumes these directly.
ExpectationTables backward_smooth_gam(const ParticleCloud& cloud,
                                      const GamChainParams& params, Rng& rng,
                                      int trajectories = 0);

// --- lognormal chain --------------------------------------------------------

// Bootstrap filter on x = log u: x_1 proposed from N(log(1/dy_1^2), 1) and
// weighted by the likelihood, then random-walk proposals with variance S^2.
ParticleCloud forward_filter_logn(const ReturnSeries& series,
                                  const LogNParams& params, int particles,
                                  Rng& rng);

Trajectories backward_trajectories_logn(const ParticleCloud& cloud,
                                        const LogNParams& params, Rng& rng,
                                        int trajectories = 0);

// Smoothed moments of log u. The lag-1 cross moment is the product of the
// smoothed marginal means (the published estimator's double sum factorizes).
struct LogNTables {
  std::vector<double> e_log_u;   // length T
  std::vector<double> e_log2_u;  // length T
  std::vector<double> e_cross;   // length T-1
};

LogNTables forward_backward_logn(const ReturnSeries& series, const LogNParams& params,
                                 int particles, Rng& rng, int trajectories = 0);

// S^2 <- (1/T) sum_t (E[x_t^2] - 2 E[x_t x_{t-1}] + E[x_{t-1}^2]), floored at
// 1e-12 to stay a valid variance.
LogNParams logn_mstep(const LogNTables& tables, std::size_t length);

// --- allocation-free variants for timed loops -------------------------------

void forward_filter_gam_into(const std::vector<double>& floored_sq,
                             const GamChainParams& params, int particles, Rng& rng,
                             ParticleCloud& cloud, McScratch& scratch);
void backward_smooth_gam_into(const ParticleCloud& cloud, const GamChainParams& params,
                              Rng& rng, int trajectories, Trajectories& traj,
                              ExpectationTables& tables, McScratch& scratch);
void forward_filter_logn_into(const std::vector<double>& floored_sq,
                              const LogNParams& params, int particles, Rng& rng,
                              ParticleCloud& cloud, McScratch& scratch);
void backward_smooth_logn_into(const ParticleCloud& cloud, const LogNParams& params,
                               Rng& rng, int trajectories, Trajectories& traj,
                               LogNTables& tables, McScratch& scratch);

// --- EM drivers --------------------------------------------------------------

enum class McVariant { gam, logn };

struct McFitConfig {
  int particles = 20;
  int trajectories = 0;  // 0: one trajectory per particle
  int max_rounds = 30;
  double tol = 1e-6;  // relative parameter change; MC noise rarely meets it
  double a0 = 1.0;
  double s2_0 = 1.0;
  double step0 = 0.1;
  int max_inner = 100;
};

struct McFitResult {
  FitReport report;
  Trajectories trajectories;  // final-round smoothing draws, for residuals
};

McFitResult fit_mc(const ReturnSeries& series, McVariant variant,
                   const McFitConfig& config, Rng& rng);

}  // namespace gamchain
