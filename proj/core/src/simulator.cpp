#include "gamchain/simulator.hpp"

#include <cmath>

#include "gamchain/errors.hpp"
#include "gamchain/sampling.hpp"

namespace gamchain {

namespace {

constexpr int kBurnIn = 100;
// Beyond this the recorded u or v values would overflow double range.
constexpr double kLogRange = 700.0;

void check_log_range(double x) {
  if (!(std::abs(x) < kLogRange)) {
    throw numeric_error(
        "simulate: latent precision left double range; use a shorter path, a "
        "larger shape, or the increments API");
  }
}

void check_u0(double u0) {
  if (!std::isfinite(u0) || u0 <= 0.0) {
    throw domain_error("simulate: starting precision must be positive and finite");
  }
}

void check_length(std::size_t length) {
  if (length < 2) throw config_error("simulate: length must be at least 2");
}

}  // namespace

SyntheticDataset simulate_gamchain(const GamChainParams& params, std::size_t length,
                                   double u0, Rng& rng) {
  params.validate();
  check_length(length);
  check_u0(u0);
  const double a = params.shape_a;

  double x = std::log(u0);  // log u_t
  for (int b = 0; b < kBurnIn; ++b) {
    const double g = sample_gamma(a, 1.0, rng);
    const double h = sample_gamma(a, 1.0, rng);
    x += std::log(h) - std::log(g);
    check_log_range(x);
  }

  SyntheticDataset data;
  data.model = "gam";
  data.gam_params = params;
  data.series.instrument_id = "synthetic-gam";
  data.series.period = "1";
  data.series.returns.resize(length);
  data.latents.u.resize(length);
  data.latents.v.resize(length - 1);

  for (std::size_t t = 0; t < length; ++t) {
    check_log_range(x);
    data.latents.u[t] = std::exp(x);
    data.series.returns[t] = rng.normal() * std::exp(-0.5 * x);
    if (t + 1 < length) {
      const double g = sample_gamma(a, 1.0, rng);
      const double h = sample_gamma(a, 1.0, rng);
      const double log_v = std::log(g) - x;  // v_t ~ Ga(A, u_t)
      check_log_range(log_v);
      data.latents.v[t] = std::exp(log_v);
      x = std::log(h) - log_v;  // u_{t+1} ~ Ga(A, v_t)
    }
  }
  return data;
}

SyntheticDataset simulate_logn(const LogNParams& params, std::size_t length,
                               double u0, Rng& rng) {
  params.validate();
  check_length(length);
  check_u0(u0);
  const double step_sd = std::sqrt(params.step_variance);

  double x = std::log(u0);
  for (int b = 0; b < kBurnIn; ++b) {
    x += step_sd * rng.normal();
    check_log_range(x);
  }

  SyntheticDataset data;
  data.model = "logn";
  data.logn_params = params;
  data.series.instrument_id = "synthetic-logn";
  data.series.period = "1";
  data.series.returns.resize(length);
  data.latents.u.resize(length);

  for (std::size_t t = 0; t < length; ++t) {
    check_log_range(x);
    data.latents.u[t] = std::exp(x);
    data.series.returns[t] = rng.normal() * std::exp(-0.5 * x);
    if (t + 1 < length) x += step_sd * rng.normal();
  }
  return data;
}

std::vector<double> simulate_gamchain_increments(const GamChainParams& params,
                                                 std::size_t count, Rng& rng) {
  params.validate();
  const double a = params.shape_a;
  std::vector<double> increments(count);
  for (auto& w : increments) {
    const double g = sample_gamma(a, 1.0, rng);
    const double h = sample_gamma(a, 1.0, rng);
    w = std::log(h) - std::log(g);
  }
  return increments;
}

}  // namespace gamchain
