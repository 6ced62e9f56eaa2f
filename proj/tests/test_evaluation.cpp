// Residual diagnostics: KS statistic and p-value against independent
// references, residual constructions, and series summary statistics.
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <doctest.h>
#include "gamchain/errors.hpp"
#include "gamchain/evaluation.hpp"
#include "gamchain/laplace.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/simulator.hpp"
#include "gamchain/special.hpp"
#include "gamchain/types.hpp"
#include "gamchain/vi.hpp"
#include "oracles.hpp"

using namespace gamchain;

namespace {

ReturnSeries make_series(std::vector<double> returns) {
  ReturnSeries series;
  series.instrument_id = "test";
  series.returns = std::move(returns);
  return series;
}

// Two-sided KS distance of a sorted sample against N(0,1), recomputed here
// with the high-precision oracle CDF.
double ks_distance_oracle(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = static_cast<double>(oracle::normal_cdf(sample[i]));
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

// Sample whose empirical CDF is a linear shrink of the uniform grid toward
// 1/2: u_i = 1/2 + ((i - 1/2)/n - 1/2) (1 - 2 beta), pushed through the
// normal quantile. Larger beta yields a larger KS distance.
std::vector<double> shrunk_normal_sample(std::size_t n, double beta) {
  std::vector<double> sample(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double grid = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double u = 0.5 + (grid - 0.5) * (1.0 - 2.0 * beta);
    sample[i] = standard_normal_quantile(u);
  }
  return sample;
}

}  // namespace

TEST_CASE("ks statistic matches a hand-computed three-point value") {
  // Sample {-1, 0, 1}: the maximum deviation is at x = 1, where the
  // empirical CDF jumps from 2/3 to 1 against Phi(1) = 0.841344746068543.
  const std::vector<double> sample = {-1.0, 0.0, 1.0};
  const ResidualReport report = ks_test_standard_normal(sample);
  CHECK(report.ks_statistic ==
        doctest::Approx(0.17467807940187634).epsilon(1e-12));
  CHECK(report.residual_count == 3);
  CHECK(report.passed);
  CHECK(report.p_value > 0.999);
}

TEST_CASE("ks statistic equals the oracle distance on random samples") {
  Rng rng(4021);
  for (std::size_t n : {10u, 137u, 2048u}) {
    std::vector<double> sample(n);
    for (auto& x : sample) x = rng.normal() * 1.3 + 0.1;
    const ResidualReport report = ks_test_standard_normal(sample);
    const double want = ks_distance_oracle(sample);
    CHECK(report.ks_statistic == doctest::Approx(want).epsilon(1e-9));
    CHECK(report.residual_count == n);
  }
}

TEST_CASE("ks p-value agrees with the Kolmogorov survival series") {
  // Crafted samples hit target values of lambda = sqrt(n) D on both sides
  // of the internal series crossover.
  const std::size_t n = 400;
  for (double lambda_target : {0.5, 0.9, 1.1, 1.17, 1.19, 1.5, 2.2}) {
    // Bisect the shrink factor until sqrt(n) D matches the target.
    double lo = 0.0, hi = 0.45;
    double lambda = 0.0;
    std::vector<double> sample;
    for (int iter = 0; iter < 80; ++iter) {
      const double beta = 0.5 * (lo + hi);
      sample = shrunk_normal_sample(n, beta);
      lambda = std::sqrt(static_cast<double>(n)) * ks_distance_oracle(sample);
      (lambda < lambda_target ? lo : hi) = beta;
    }
    const ResidualReport report = ks_test_standard_normal(sample);
    const double want =
        static_cast<double>(oracle::kolmogorov_q(static_cast<long double>(
            std::sqrt(static_cast<double>(n)) * report.ks_statistic)));
    CHECK(report.p_value == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("ks pass flag follows the alpha threshold") {
  // Insensitive sanity point: Q(1.0) ~ 0.27, so the same sample passes at
  // alpha = 0.05 and fails at alpha = 0.5.
  const std::size_t n = 400;
  double lo = 0.0, hi = 0.45;
  std::vector<double> sample;
  for (int iter = 0; iter < 80; ++iter) {
    const double beta = 0.5 * (lo + hi);
    sample = shrunk_normal_sample(n, beta);
    const double lambda =
        std::sqrt(static_cast<double>(n)) * ks_distance_oracle(sample);
    (lambda < 1.0 ? lo : hi) = beta;
  }
  const ResidualReport at_05 = ks_test_standard_normal(sample, 0.05);
  const ResidualReport at_50 = ks_test_standard_normal(sample, 0.5);
  CHECK(at_05.p_value == doctest::Approx(0.26999967168).epsilon(1e-4));
  CHECK(at_05.passed);
  CHECK_FALSE(at_50.passed);
}

TEST_CASE("ks test rejects bad inputs") {
  CHECK_THROWS_AS(ks_test_standard_normal({}), input_error);
  CHECK_THROWS_AS(ks_test_standard_normal({0.1, 0.2}, 0.0), config_error);
  CHECK_THROWS_AS(ks_test_standard_normal({0.1, 0.2}, 1.0), config_error);
}

TEST_CASE("exact residuals on simulated data are standard normal") {
  Rng sim_rng(515);
  const SyntheticDataset data =
      simulate_gamchain(GamChainParams{1.0}, 5000, 1.0, sim_rng);
  const std::vector<double> residuals =
      exact_residuals(data.latents, data.series);
  REQUIRE(residuals.size() == 5000);
  // dy_t sqrt(u_t) recovers the underlying N(0,1) shocks exactly.
  const ResidualReport report = ks_test_standard_normal(residuals);
  CHECK(report.passed);
  CHECK(report.p_value > 0.05);
}

TEST_CASE("raw residuals on heavy-tailed data fail the normality test") {
  Rng sim_rng(515);
  const SyntheticDataset data =
      simulate_gamchain(GamChainParams{1.0}, 5000, 1.0, sim_rng);
  const std::vector<double> residuals = raw_residuals(data.series);
  CHECK(residuals == data.series.returns);
  const ResidualReport report = ks_test_standard_normal(residuals);
  CHECK_FALSE(report.passed);
}

TEST_CASE("gamma-posterior residuals standardize a fitted series") {
  Rng sim_rng(99);
  const SyntheticDataset data =
      simulate_gamchain(GamChainParams{1.0}, 2000, 1.0, sim_rng);
  const FitResult result = fit(data.series);
  Rng rng(7);
  const std::vector<double> residuals =
      draw_residuals(result.posterior, data.series, rng);
  REQUIRE(residuals.size() == data.series.returns.size());
  for (double r : residuals) CHECK(std::isfinite(r));
  const ResidualReport report = ks_test_standard_normal(residuals);
  CHECK(report.residual_count == 2000);

  // Factorized gamma marginals are narrower than the exact smoothing
  // posterior, so one-draw residuals keep a small systematic KS distance
  // (about 0.05 on this kind of series); the draws must still strip nearly
  // all of the heavy-tail signal carried by the raw returns.
  const ResidualReport raw_report =
      ks_test_standard_normal(raw_residuals(data.series));
  CHECK(report.ks_statistic < 0.10);
  CHECK(report.ks_statistic < 0.25 * raw_report.ks_statistic);

  // Same posterior, same seed: identical draw.
  Rng rng2(7);
  CHECK(draw_residuals(result.posterior, data.series, rng2) == residuals);
}

TEST_CASE("gaussian-posterior residuals are deterministic per seed") {
  Rng sim_rng(61);
  const SyntheticDataset data =
      simulate_logn(LogNParams{0.25}, 500, 1.0, sim_rng);
  LaplaceFitConfig config;
  config.s2_0 = 0.25;
  config.max_rounds = 40;
  const LaplaceFitResult result = fit_logn_vi(data.series, config);
  Rng rng(11);
  const std::vector<double> residuals =
      draw_residuals(result.posterior, data.series, rng);
  REQUIRE(residuals.size() == 500);
  for (double r : residuals) CHECK(std::isfinite(r));
  Rng rng2(11);
  CHECK(draw_residuals(result.posterior, data.series, rng2) == residuals);
}

TEST_CASE("trajectory residuals use u directly or exp(x) by kind") {
  const ReturnSeries series = make_series({0.3, -0.7, 1.1});
  Trajectories gam;
  gam.count = 1;
  gam.length = 3;
  gam.kind = "gam";
  gam.values = {1.0, 1.0, 1.0};
  Rng rng(3);
  CHECK(draw_residuals(gam, series, rng) == series.returns);

  Trajectories logn = gam;
  logn.kind = "logn";
  logn.values = {0.0, 0.0, 0.0};
  CHECK(draw_residuals(logn, series, rng) == series.returns);

  // u = 4 scales residuals by 2.
  Trajectories scaled = gam;
  scaled.values = {4.0, 4.0, 4.0};
  const std::vector<double> doubled = draw_residuals(scaled, series, rng);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(doubled[t] == doctest::Approx(2.0 * series.returns[t]));
  }

  Trajectories empty = gam;
  empty.count = 0;
  empty.values.clear();
  CHECK_THROWS_AS(draw_residuals(empty, series, rng), config_error);

  Trajectories short_traj = gam;
  short_traj.length = 2;
  short_traj.values = {1.0, 1.0};
  CHECK_THROWS_AS(draw_residuals(short_traj, series, rng), config_error);
}

TEST_CASE("residual pass rate averages the pass flags") {
  std::vector<ResidualReport> reports(4);
  reports[0].passed = true;
  reports[1].passed = false;
  reports[2].passed = true;
  reports[3].passed = true;
  CHECK(residual_pass_rate(reports) == doctest::Approx(0.75));
  CHECK_THROWS_AS(residual_pass_rate({}), input_error);
}

TEST_CASE("series stats match hand-computed moments") {
  // Returns {1,-1,2,-2}: mean 0, variance 2.5, kurtosis 8.5/6.25 = 1.36.
  // Log squared returns {0,0,log 4,log 4} difference to {0,d,0} with
  // d = 2 log 2: population variance 2 d^2 / 9, kurtosis exactly 3/2.
  const SeriesStats stats = series_stats(make_series({1.0, -1.0, 2.0, -2.0}));
  CHECK(stats.length == 4);
  CHECK(stats.sigma_r == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
  CHECK(stats.gamma_r == doctest::Approx(1.36).epsilon(1e-14));
  const double d = 2.0 * std::log(2.0);
  CHECK(stats.sigma_v ==
        doctest::Approx(std::sqrt(2.0 * d * d / 9.0)).epsilon(1e-13));
  CHECK(stats.gamma_v == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("series stats skip zero returns before differencing") {
  // {1,0,-1,2}: the zero is dropped, so log squared returns are
  // {0,0,log 4} and the diffs {0, 2 log 2}.
  const SeriesStats stats = series_stats(make_series({1.0, 0.0, -1.0, 2.0}));
  CHECK(stats.length == 4);
  const double d = 2.0 * std::log(2.0);
  // Two diffs {0, d}: mean d/2, population variance d^2/4.
  CHECK(stats.sigma_v == doctest::Approx(0.5 * d).epsilon(1e-13));
  // Symmetric two-point sample: kurtosis 1.
  CHECK(stats.gamma_v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("series stats are zero for degenerate increment series") {
  const SeriesStats stats = series_stats(make_series({1.0, 1.0, 1.0}));
  CHECK(stats.sigma_v == 0.0);
  CHECK(stats.gamma_v == 0.0);
}
