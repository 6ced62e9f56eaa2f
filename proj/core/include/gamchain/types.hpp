// Shared value types passed between the estimators, the simulator, the
// evaluation harness, and the report writers.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gamchain {

// Log-return series for a single instrument.
struct ReturnSeries {
  std::vector<double> returns;
  std::string instrument_id;
  std::string period;

  // Throws input_error unless there are >= 2 finite returns.
  void validate() const;
};

// Gamma-chain shape parameter A (both transition directions share it).
struct GamChainParams {
  double shape_a = 1.0;
  void validate() const;
};

// Log-volatility random-walk step variance S^2.
struct LogNParams {
  double step_variance = 1.0;
  void validate() const;
};

// Simulated latent precision path: u has length T; v holds the T-1 dummy
// nodes for the gamma chain and is empty for the lognormal chain.
struct LatentPath {
  std::vector<double> u;
  std::vector<double> v;
};

// Factorized gamma posterior: u-nodes (length T) and v-nodes (length T-1 for
// the consistent chain; length T when realizing the printed literal rows).
struct GammaPosterior {
  std::vector<double> a_u, b_u;
  std::vector<double> a_v, b_v;
};

// Factorized Gaussian posterior over log u_t.
struct GaussianPosterior {
  std::vector<double> mu, sigma2;
};

// Filtered particle representation. values/weights are T x N row-major with
// weights normalized per time step. For the gamma chain the dummy-node
// particles and their weights ride along; for the lognormal chain values hold
// log u and v_values stays empty.
struct ParticleCloud {
  std::size_t length = 0;
  std::size_t particles = 0;
  std::string kind;  // "gam" or "logn"
  std::vector<double> values, weights;
  std::vector<double> v_values, v_weights;
};

// EM fit summary. a_trace records the driving parameter per round: A for the
// gamma-chain engines, S^2 for the lognormal engines.
struct FitReport {
  std::string engine;
  GamChainParams params;
  LogNParams logn_params;
  std::vector<double> objective_trace;
  std::vector<double> a_trace;
  int iterations = 0;
  double estep_seconds = 0.0;
  double mstep_seconds = 0.0;
  bool converged = false;
};

struct SyntheticDataset {
  ReturnSeries series;
  LatentPath latents;
  std::string model;  // "gam" or "logn"
  GamChainParams gam_params;
  LogNParams logn_params;
  std::uint64_t seed = 0;
};

struct ResidualReport {
  std::string instrument_id;
  double ks_statistic = 0.0;
  double p_value = 0.0;
  bool passed = false;
  std::size_t residual_count = 0;
  std::string engine;
};

struct SeriesStats {
  double sigma_r = 0.0;  // std of returns
  double gamma_r = 0.0;  // kurtosis of returns
  double sigma_v = 0.0;  // std of log squared-return increments
  double gamma_v = 0.0;  // kurtosis of log squared-return increments
  std::size_t length = 0;
};

struct BarRecord {
  std::int64_t timestamp = 0;
  double close = 0.0;
  double volume = 0.0;
};

struct BenchReport {
  std::string engine;
  std::size_t sequence_length = 0;
  int iterations = 0;
  double estep_seconds = 0.0;
  double mstep_seconds = 0.0;
  double total_seconds = 0.0;
  int particles = 0;
};

struct DerivationCheck {
  std::string name;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

// Floor for squared returns: 1e-12 times the median squared return, falling
// back to the smallest positive squared return when the median is zero.
// Throws input_error if every return is zero.
double squared_return_floor(const std::vector<double>& returns);

// max(dy_t^2, floor) for every t.
std::vector<double> floored_squared_returns(const ReturnSeries& series);

}  // namespace gamchain
