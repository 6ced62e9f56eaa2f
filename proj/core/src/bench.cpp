#include "gamchain/bench.hpp"

#include <algorithm>
#include <chrono>

#include "gamchain/errors.hpp"
#include "gamchain/laplace.hpp"
#include "gamchain/mc.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/vi.hpp"

namespace gamchain {
namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

// Runs warm-up plus `iterations` timed rounds of the engine's EM loop on a
// fixed-length series, accumulating E-step and M-step wall time separately.
BenchReport run_one(const std::string& engine, const ReturnSeries& series,
                    const BenchConfig& config, std::uint64_t rep_seed) {
  BenchReport report;
  report.engine = engine;
  report.sequence_length = series.returns.size();
  report.iterations = config.iterations;
  report.particles = (engine == "c2" || engine == "c4") ? config.particles : 0;

  const std::size_t length = series.returns.size();
  Rng rng(rep_seed);

  if (engine == "c3") {
    const std::vector<double> half_sq = half_squared_returns(series);
    GammaPosterior posterior = init_posterior(series);
    ExpectationTables tables;
    tables.e_u.resize(length);
    tables.e_log_u.resize(length);
    tables.e_log_v.resize(length - 1);
    GamChainParams params{config.shape_a0};
    auto round = [&](bool timed) {
      auto t0 = clock_type::now();
      estep_into(posterior, half_sq, params, 1, false, tables);
      if (timed) report.estep_seconds += seconds_since(t0);
      t0 = clock_type::now();
      const double g = edge_log_sum(tables) / (2.0 * static_cast<double>(length - 1));
      params.shape_a = mstep_shape(g, params.shape_a);
      if (timed) report.mstep_seconds += seconds_since(t0);
    };
    round(false);
    for (std::size_t i = 0; i < config.iterations; ++i) round(true);
  } else if (engine == "c1") {
    std::vector<double> floored_sq = floored_squared_returns(series);
    GaussianPosterior posterior = init_gaussian_posterior(series);
    LogNParams params{config.s2_0};
    auto round = [&](bool timed) {
      auto t0 = clock_type::now();
      laplace_sweep_into(posterior, floored_sq, params, 1.0);
      if (timed) report.estep_seconds += seconds_since(t0);
      t0 = clock_type::now();
      params = logn_vi_mstep(posterior, length);
      if (timed) report.mstep_seconds += seconds_since(t0);
    };
    round(false);
    for (std::size_t i = 0; i < config.iterations; ++i) round(true);
  } else if (engine == "c2") {
    std::vector<double> floored_sq = floored_squared_returns(series);
    LogNParams params{config.s2_0};
    ParticleCloud cloud;
    Trajectories traj;
    LogNTables tables;
    McScratch scratch;
    auto round = [&](bool timed) {
      auto t0 = clock_type::now();
      forward_filter_logn_into(floored_sq, params, config.particles, rng, cloud, scratch);
      backward_smooth_logn_into(cloud, params, rng, 0, traj, tables, scratch);
      if (timed) report.estep_seconds += seconds_since(t0);
      t0 = clock_type::now();
      params = logn_mstep(tables, length);
      if (timed) report.mstep_seconds += seconds_since(t0);
    };
    round(false);
    for (std::size_t i = 0; i < config.iterations; ++i) round(true);
  } else if (engine == "c4") {
    std::vector<double> floored_sq = floored_squared_returns(series);
    GamChainParams params{config.shape_a0};
    ParticleCloud cloud;
    Trajectories traj;
    ExpectationTables tables;
    McScratch scratch;
    auto round = [&](bool timed) {
      auto t0 = clock_type::now();
      forward_filter_gam_into(floored_sq, params, config.particles, rng, cloud, scratch);
      backward_smooth_gam_into(cloud, params, rng, 0, traj, tables, scratch);
      if (timed) report.estep_seconds += seconds_since(t0);
      t0 = clock_type::now();
      const double g = edge_log_sum(tables) / (2.0 * static_cast<double>(length - 1));
      params.shape_a = mstep_shape(g, params.shape_a);
      if (timed) report.mstep_seconds += seconds_since(t0);
    };
    round(false);
    for (std::size_t i = 0; i < config.iterations; ++i) round(true);
  } else {
    throw config_error("run_benchmark: unknown engine '" + engine + "'");
  }

  report.total_seconds = report.estep_seconds + report.mstep_seconds;
  return report;
}

}  // namespace

std::vector<BenchReport> run_benchmark(const ReturnSeries& base, const BenchConfig& config) {
  if (config.engines.empty()) throw config_error("run_benchmark: no engines");
  if (config.lengths.empty()) throw config_error("run_benchmark: no lengths");
  if (config.iterations == 0) throw config_error("run_benchmark: iterations must be positive");
  if (config.repetitions == 0) throw config_error("run_benchmark: repetitions must be positive");
  const std::size_t max_length = *std::max_element(config.lengths.begin(), config.lengths.end());
  if (base.returns.size() < max_length) {
    throw config_error("run_benchmark: base series shorter than largest length");
  }

  std::vector<BenchReport> out;
  out.reserve(config.engines.size() * config.lengths.size());
  for (const auto& engine : config.engines) {
    for (std::size_t length : config.lengths) {
      if (length < 2) throw config_error("run_benchmark: length must be at least 2");
      ReturnSeries prefix;
      prefix.returns.assign(base.returns.begin(),
                            base.returns.begin() + static_cast<std::ptrdiff_t>(length));
      prefix.instrument_id = base.instrument_id;
      prefix.period = base.period;
      std::vector<BenchReport> reps;
      reps.reserve(config.repetitions);
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        reps.push_back(run_one(engine, prefix, config, config.seed + rep));
      }
      std::sort(reps.begin(), reps.end(), [](const BenchReport& a, const BenchReport& b) {
        return a.total_seconds < b.total_seconds;
      });
      out.push_back(reps[reps.size() / 2]);
    }
  }
  return out;
}

}  // namespace gamchain
