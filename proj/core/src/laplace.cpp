#include "gamchain/laplace.hpp"

#include <chrono>
#include <cmath>

#include "gamchain/errors.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

namespace {

void update_node(GaussianPosterior& post, const std::vector<double>& sq, double s2,
                 double damping, std::size_t t) {
  const std::size_t last = sq.size() - 1;
  double c;
  double quarter;  // coefficient of S^2 * dy^2 inside the W argument
  double prior_precision;
  if (t == 0) {
    c = 0.5 * s2 + post.mu[1];
    quarter = 0.5;
    prior_precision = 2.0 / s2;
  } else if (t == last) {
    c = 0.5 * s2 + post.mu[last - 1];
    quarter = 0.5;
    prior_precision = 2.0 / s2;
  } else {
    c = 0.25 * s2 + 0.5 * (post.mu[t - 1] + post.mu[t + 1]);
    quarter = 0.25;
    prior_precision = 4.0 / s2;
  }
  // W argument in log space so extreme modes cannot overflow.
  const double log_arg = std::log(quarter * s2 * sq[t]) + c;
  const double mode = c - lambert_w0_log(log_arg);
  post.mu[t] = damping * mode + (1.0 - damping) * post.mu[t];
  post.sigma2[t] = 2.0 / (std::exp(post.mu[t]) * sq[t] + prior_precision);
}

}  // namespace

GaussianPosterior init_gaussian_posterior(const ReturnSeries& series) {
  const std::vector<double> sq = floored_squared_returns(series);
  GaussianPosterior post;
  post.mu.resize(sq.size());
  post.sigma2.assign(sq.size(), 1.0);
  for (std::size_t t = 0; t < sq.size(); ++t) post.mu[t] = -std::log(sq[t]);
  return post;
}

void laplace_update(GaussianPosterior& posterior, const ReturnSeries& series,
                    const LogNParams& params, std::size_t t, double damping) {
  params.validate();
  const std::vector<double> sq = floored_squared_returns(series);
  if (t >= sq.size()) throw input_error("laplace_update: index out of range");
  if (posterior.mu.size() != sq.size()) {
    throw config_error("laplace_update: posterior length does not match the series");
  }
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw config_error("laplace_update: damping must be in (0, 1]");
  }
  update_node(posterior, sq, params.step_variance, damping, t);
}

void laplace_sweep_into(GaussianPosterior& posterior,
                        const std::vector<double>& floored_sq,
                        const LogNParams& params, double damping) {
  for (std::size_t t = 0; t < floored_sq.size(); ++t) {
    update_node(posterior, floored_sq, params.step_variance, damping, t);
  }
}

LogNParams logn_vi_mstep(const GaussianPosterior& posterior, std::size_t length) {
  if (length < 2 || posterior.mu.size() != length ||
      posterior.sigma2.size() != length) {
    throw config_error("logn_vi_mstep: posterior length does not match the series");
  }
  double total = 0.0;
  for (std::size_t t = 1; t < length; ++t) {
    const double diff = posterior.mu[t] - posterior.mu[t - 1];
    total += diff * diff + posterior.sigma2[t] + posterior.sigma2[t - 1];
  }
  LogNParams params;
  params.step_variance = std::max(total / static_cast<double>(length), 1e-12);
  return params;
}

LaplaceFitResult fit_logn_vi(const ReturnSeries& series,
                             const LaplaceFitConfig& config) {
  series.validate();
  if (!(config.tol > 0.0) || config.max_rounds < 1 || config.sweeps < 1 ||
      !(config.s2_0 > 0.0) || !(config.damping > 0.0 && config.damping <= 1.0)) {
    throw config_error("fit_logn_vi: invalid configuration");
  }
  const std::vector<double> sq = floored_squared_returns(series);
  const std::size_t length = sq.size();

  LaplaceFitResult result;
  result.report.engine = "c1";
  result.posterior = init_gaussian_posterior(series);

  double s2 = config.s2_0;
  using clock = std::chrono::steady_clock;
  for (int round = 1; round <= config.max_rounds; ++round) {
    const auto t0 = clock::now();
    for (int s = 0; s < config.sweeps; ++s) {
      laplace_sweep_into(result.posterior, sq, LogNParams{s2}, config.damping);
    }
    const auto t1 = clock::now();
    const double s2_next = logn_vi_mstep(result.posterior, length).step_variance;
    const auto t2 = clock::now();
    result.report.estep_seconds += std::chrono::duration<double>(t1 - t0).count();
    result.report.mstep_seconds += std::chrono::duration<double>(t2 - t1).count();
    result.report.a_trace.push_back(s2_next);
    result.report.objective_trace.push_back(
        -0.5 * (static_cast<double>(length - 1) * std::log(s2_next) +
                static_cast<double>(length)));
    result.report.iterations = round;
    const bool settled = std::abs(s2_next - s2) <= config.tol * std::abs(s2);
    s2 = s2_next;
    if (settled) {
      result.report.converged = true;
      break;
    }
  }
  result.report.logn_params.step_variance = s2;
  return result;
}

}  // namespace gamchain
