#include "gamchain/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gamchain/errors.hpp"
#include "gamchain/sampling.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

namespace {

void check_lengths(std::size_t posterior_length, std::size_t series_length,
                   const char* what) {
  if (posterior_length != series_length) {
    throw config_error(std::string(what) + ": posterior length " +
                       std::to_string(posterior_length) +
                       " does not match series length " +
                       std::to_string(series_length));
  }
}

// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-10) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form, accurate for small lambda.
    const double factor = std::sqrt(2.0 * std::numbers::pi) / lambda;
    const double base = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 5; k += 2) sum += std::exp(-base * k * k);
    return std::clamp(1.0 - factor * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 8; ++k) {
    sum += sign * std::exp(-2.0 * k * k * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

std::vector<double> draw_residuals(const GammaPosterior& posterior,
                                   const ReturnSeries& series, Rng& rng) {
  series.validate();
  check_lengths(posterior.a_u.size(), series.returns.size(), "draw_residuals");
  std::vector<double> residuals(series.returns.size());
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    const double u = sample_gamma(posterior.a_u[t], posterior.b_u[t], rng);
    residuals[t] = series.returns[t] * std::sqrt(u);
  }
  return residuals;
}

std::vector<double> draw_residuals(const GaussianPosterior& posterior,
                                   const ReturnSeries& series, Rng& rng) {
  series.validate();
  check_lengths(posterior.mu.size(), series.returns.size(), "draw_residuals");
  std::vector<double> residuals(series.returns.size());
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    const double x = posterior.mu[t] + std::sqrt(posterior.sigma2[t]) * rng.normal();
    residuals[t] = series.returns[t] * std::exp(0.5 * x);
  }
  return residuals;
}

std::vector<double> draw_residuals(const Trajectories& trajectories,
                                   const ReturnSeries& series, Rng& rng) {
  series.validate();
  check_lengths(trajectories.length, series.returns.size(), "draw_residuals");
  if (trajectories.count == 0) throw config_error("draw_residuals: no trajectories");
  const bool log_scale = trajectories.kind == "logn";
  std::vector<double> residuals(series.returns.size());
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform() * trajectories.count);
    const double value = trajectories.values[std::min(m, trajectories.count - 1) *
                                                 trajectories.length +
                                             t];
    const double u = log_scale ? std::exp(value) : value;
    residuals[t] = series.returns[t] * std::sqrt(u);
  }
  return residuals;
}

std::vector<double> exact_residuals(const LatentPath& latents,
                                    const ReturnSeries& series) {
  series.validate();
  check_lengths(latents.u.size(), series.returns.size(), "exact_residuals");
  std::vector<double> residuals(series.returns.size());
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    residuals[t] = series.returns[t] * std::sqrt(latents.u[t]);
  }
  return residuals;
}

std::vector<double> raw_residuals(const ReturnSeries& series) {
  series.validate();
  return series.returns;
}

ResidualReport ks_test_standard_normal(const std::vector<double>& sample,
                                       double alpha) {
  if (sample.empty()) throw input_error("ks_test: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("ks_test: alpha must be in (0,1)");
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = standard_normal_cdf(sorted[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lower = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(upper, lower));
  }
  ResidualReport report;
  report.ks_statistic = d;
  report.p_value = kolmogorov_q(std::sqrt(n) * d);
  report.passed = report.p_value > alpha;
  report.residual_count = sorted.size();
  return report;
}

double residual_pass_rate(const std::vector<ResidualReport>& reports) {
  if (reports.empty()) throw input_error("residual_pass_rate: no reports");
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.passed ? 1 : 0;
  return static_cast<double>(passed) / static_cast<double>(reports.size());
}

namespace {

// Population std and non-excess kurtosis; kurtosis is 0 for a degenerate
// sample.
void central_moments(const std::vector<double>& xs, double& sigma, double& kurtosis) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  sigma = std::sqrt(m2);
  kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
}

}  // namespace

SeriesStats series_stats(const ReturnSeries& series) {
  series.validate();
  SeriesStats stats;
  stats.length = series.returns.size();
  central_moments(series.returns, stats.sigma_r, stats.gamma_r);

  // log of squared returns, zero returns skipped, then first differences.
  std::vector<double> log_sq;
  log_sq.reserve(series.returns.size());
  for (double r : series.returns) {
    if (r != 0.0) log_sq.push_back(std::log(r * r));
  }
  if (log_sq.size() >= 2) {
    std::vector<double> diffs(log_sq.size() - 1);
    for (std::size_t i = 0; i + 1 < log_sq.size(); ++i) {
      diffs[i] = log_sq[i + 1] - log_sq[i];
    }
    central_moments(diffs, stats.sigma_v, stats.gamma_v);
  }
  return stats;
}

}  // namespace gamchain
