#include "gamchain/mc.hpp"

#include <chrono>
#include <cmath>

#include "gamchain/errors.hpp"
#include "gamchain/sampling.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

namespace {

// Normalizes log-weights into w (max-shifted); returns the effective sample
// size 1 / sum w^2.
double normalize_log_weights(const std::vector<double>& lw, double* w, int n) {
  double m = lw[0];
  for (int i = 1; i < n; ++i) m = std::max(m, lw[i]);
  if (!std::isfinite(m)) throw numeric_error("particle weights degenerated");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] = std::exp(lw[i] - m);
    total += w[i];
  }
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] /= total;
    sum_sq += w[i] * w[i];
  }
  return 1.0 / sum_sq;
}

void systematic_resample(double* values, double* w, int n, Rng& rng,
                         std::vector<double>& row) {
  row.resize(n);
  const double step = 1.0 / n;
  double position = rng.uniform() * step;
  double cumulative = w[0];
  int i = 0;
  for (int k = 0; k < n; ++k) {
    while (cumulative < position && i + 1 < n) cumulative += w[++i];
    row[k] = values[i];
    position += step;
  }
  for (int k = 0; k < n; ++k) {
    values[k] = row[k];
    w[k] = step;
  }
}

int categorical_from_weights(const double* w, int n, Rng& rng) {
  const double r = rng.uniform();
  double cumulative = 0.0;
  for (int i = 0; i < n; ++i) {
    cumulative += w[i];
    if (r < cumulative) return i;
  }
  return n - 1;
}

// Samples an index proportional to exp(logits); logits are clobbered.
int categorical_from_logits(std::vector<double>& logits, int n, Rng& rng) {
  double m = logits[0];
  for (int i = 1; i < n; ++i) m = std::max(m, logits[i]);
  if (!std::isfinite(m)) throw numeric_error("backward weights degenerated");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    logits[i] = std::exp(logits[i] - m);
    total += logits[i];
  }
  const double r = rng.uniform() * total;
  double cumulative = 0.0;
  for (int i = 0; i < n; ++i) {
    cumulative += logits[i];
    if (r < cumulative) return i;
  }
  return n - 1;
}

void check_particles(int particles) {
  if (particles < 2) throw config_error("particle count must be at least 2");
}

void cache_logs(const std::vector<double>& src, std::vector<double>& dst) {
  dst.resize(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::log(src[i]);
}

}  // namespace

void forward_filter_gam_into(const std::vector<double>& floored_sq,
                             const GamChainParams& params, int particles, Rng& rng,
                             ParticleCloud& cloud, McScratch& scratch) {
  params.validate();
  check_particles(particles);
  const std::size_t length = floored_sq.size();
  const int n = particles;
  const double a = params.shape_a;

  cloud.length = length;
  cloud.particles = static_cast<std::size_t>(n);
  cloud.kind = "gam";
  cloud.values.resize(length * n);
  cloud.weights.resize(length * n);
  cloud.v_values.resize((length - 1) * n);
  cloud.v_weights.resize((length - 1) * n);
  scratch.log_weight_accum.resize(n);

  // Initial state: exact conditional under the scale prior, uniform weights.
  double* u_row = cloud.values.data();
  double* w_row = cloud.weights.data();
  for (int i = 0; i < n; ++i) {
    u_row[i] = sample_gamma(0.5, 0.5 * floored_sq[0], rng);
    w_row[i] = 1.0 / n;
  }

  for (std::size_t t = 1; t < length; ++t) {
    const double* u_prev = cloud.values.data() + (t - 1) * n;
    const double* w_prev = cloud.weights.data() + (t - 1) * n;
    double* v_row = cloud.v_values.data() + (t - 1) * n;
    double* vw_row = cloud.v_weights.data() + (t - 1) * n;
    u_row = cloud.values.data() + t * n;
    w_row = cloud.weights.data() + t * n;
    const double half_sq = 0.5 * floored_sq[t];
    for (int i = 0; i < n; ++i) {
      vw_row[i] = w_prev[i];
      v_row[i] = sample_gamma(a, u_prev[i], rng);
      u_row[i] = sample_gamma(a, v_row[i], rng);
      scratch.log_weight_accum[i] =
          std::log(w_prev[i]) + 0.5 * std::log(u_row[i]) - u_row[i] * half_sq;
    }
    const double ess = normalize_log_weights(scratch.log_weight_accum, w_row, n);
    if (ess < 0.5 * n) systematic_resample(u_row, w_row, n, rng, scratch.row);
  }
}

ParticleCloud forward_filter_gam(const ReturnSeries& series,
                                 const GamChainParams& params, int particles,
                                 Rng& rng) {
  series.validate();
  ParticleCloud cloud;
  McScratch scratch;
  forward_filter_gam_into(floored_squared_returns(series), params, particles, rng,
                          cloud, scratch);
  return cloud;
}

void backward_smooth_gam_into(const ParticleCloud& cloud, const GamChainParams& params,
                              Rng& rng, int trajectories, Trajectories& traj,
                              ExpectationTables& tables, McScratch& scratch) {
  params.validate();
  if (cloud.kind != "gam") throw config_error("backward_smooth_gam: wrong cloud kind");
  const std::size_t length = cloud.length;
  const int n = static_cast<int>(cloud.particles);
  const int m_count = trajectories > 0 ? trajectories : n;
  const double a = params.shape_a;

  cache_logs(cloud.values, scratch.log_values);
  cache_logs(cloud.weights, scratch.log_weights);
  cache_logs(cloud.v_values, scratch.log_v_values);
  cache_logs(cloud.v_weights, scratch.log_v_weights);
  scratch.logits.resize(n);

  traj.count = static_cast<std::size_t>(m_count);
  traj.length = length;
  traj.kind = "gam";
  traj.values.resize(traj.count * length);
  traj.v_values.resize(traj.count * (length - 1));

  tables.e_u.assign(length, 0.0);
  tables.e_log_u.assign(length, 0.0);
  tables.e_log_v.assign(length - 1, 0.0);

  for (int m = 0; m < m_count; ++m) {
    double* path = traj.values.data() + static_cast<std::size_t>(m) * length;
    double* v_path = traj.v_values.data() + static_cast<std::size_t>(m) * (length - 1);
    const double* w_last = cloud.weights.data() + (length - 1) * n;
    int idx = categorical_from_weights(w_last, n, rng);
    double u_next = cloud.values[(length - 1) * n + idx];
    path[length - 1] = u_next;
    tables.e_u[length - 1] += u_next;
    tables.e_log_u[length - 1] += scratch.log_values[(length - 1) * n + idx];

    for (std::size_t rt = length - 1; rt-- > 0;) {
      const double* v_row = cloud.v_values.data() + rt * n;
      const double* u_row = cloud.values.data() + rt * n;
      const double* lv_row = scratch.log_v_values.data() + rt * n;
      const double* lu_row = scratch.log_values.data() + rt * n;
      const double* lvw_row = scratch.log_v_weights.data() + rt * n;
      const double* lw_row = scratch.log_weights.data() + rt * n;
      // Reselect the dummy node against Ga(u_next; A, v).
      for (int i = 0; i < n; ++i) {
        scratch.logits[i] = lvw_row[i] + a * lv_row[i] - v_row[i] * u_next;
      }
      idx = categorical_from_logits(scratch.logits, n, rng);
      const double v_pick = v_row[idx];
      v_path[rt] = v_pick;
      tables.e_log_v[rt] += lv_row[idx];
      // Reselect the state against Ga(v_pick; A, u).
      for (int i = 0; i < n; ++i) {
        scratch.logits[i] = lw_row[i] + a * lu_row[i] - u_row[i] * v_pick;
      }
      idx = categorical_from_logits(scratch.logits, n, rng);
      u_next = u_row[idx];
      path[rt] = u_next;
      tables.e_u[rt] += u_next;
      tables.e_log_u[rt] += lu_row[idx];
    }
  }
  const double inv_m = 1.0 / m_count;
  for (auto& x : tables.e_u) x *= inv_m;
  for (auto& x : tables.e_log_u) x *= inv_m;
  for (auto& x : tables.e_log_v) x *= inv_m;
}

Trajectories backward_trajectories_gam(const ParticleCloud& cloud,
                                       const GamChainParams& params, Rng& rng,
                                       int trajectories) {
  Trajectories traj;
  ExpectationTables tables;
  McScratch scratch;
  backward_smooth_gam_into(cloud, params, rng, trajectories, traj, tables, scratch);
  return traj;
}

ExpectationTables backward_smooth_gam(const ParticleCloud& cloud,
                                      const GamChainParams& params, Rng& rng,
                                      int trajectories) {
  Trajectories traj;
  ExpectationTables tables;
  McScratch scratch;
  backward_smooth_gam_into(cloud, params, rng, trajectories, traj, tables, scratch);
  return tables;
}

void forward_filter_logn_into(const std::vector<double>& floored_sq,
                              const LogNParams& params, int particles, Rng& rng,
                              ParticleCloud& cloud, McScratch& scratch) {
  params.validate();
  check_particles(particles);
  const std::size_t length = floored_sq.size();
  const int n = particles;
  const double step_sd = std::sqrt(params.step_variance);

  cloud.length = length;
  cloud.particles = static_cast<std::size_t>(n);
  cloud.kind = "logn";
  cloud.values.resize(length * n);
  cloud.weights.resize(length * n);
  cloud.v_values.clear();
  cloud.v_weights.clear();
  scratch.log_weight_accum.resize(n);

  // Initial proposal centered on the method-of-moments guess log(1/dy_1^2);
  // weights carry the likelihood.
  const double mu0 = -std::log(floored_sq[0]);
  double* x_row = cloud.values.data();
  double* w_row = cloud.weights.data();
  for (int i = 0; i < n; ++i) {
    x_row[i] = mu0 + rng.normal();
    scratch.log_weight_accum[i] =
        0.5 * x_row[i] - 0.5 * std::exp(x_row[i]) * floored_sq[0];
  }
  double ess = normalize_log_weights(scratch.log_weight_accum, w_row, n);
  if (ess < 0.5 * n) systematic_resample(x_row, w_row, n, rng, scratch.row);

  for (std::size_t t = 1; t < length; ++t) {
    const double* x_prev = cloud.values.data() + (t - 1) * n;
    const double* w_prev = cloud.weights.data() + (t - 1) * n;
    x_row = cloud.values.data() + t * n;
    w_row = cloud.weights.data() + t * n;
    const double half_sq = 0.5 * floored_sq[t];
    for (int i = 0; i < n; ++i) {
      x_row[i] = x_prev[i] + step_sd * rng.normal();
      scratch.log_weight_accum[i] =
          std::log(w_prev[i]) + 0.5 * x_row[i] - std::exp(x_row[i]) * half_sq;
    }
    ess = normalize_log_weights(scratch.log_weight_accum, w_row, n);
    if (ess < 0.5 * n) systematic_resample(x_row, w_row, n, rng, scratch.row);
  }
}

ParticleCloud forward_filter_logn(const ReturnSeries& series,
                                  const LogNParams& params, int particles,
                                  Rng& rng) {
  series.validate();
  ParticleCloud cloud;
  McScratch scratch;
  forward_filter_logn_into(floored_squared_returns(series), params, particles, rng,
                           cloud, scratch);
  return cloud;
}

void backward_smooth_logn_into(const ParticleCloud& cloud, const LogNParams& params,
                               Rng& rng, int trajectories, Trajectories& traj,
                               LogNTables& tables, McScratch& scratch) {
  params.validate();
  if (cloud.kind != "logn") throw config_error("backward_smooth_logn: wrong cloud kind");
  const std::size_t length = cloud.length;
  const int n = static_cast<int>(cloud.particles);
  const int m_count = trajectories > 0 ? trajectories : n;
  const double inv_two_s2 = 0.5 / params.step_variance;

  cache_logs(cloud.weights, scratch.log_weights);
  scratch.logits.resize(n);

  traj.count = static_cast<std::size_t>(m_count);
  traj.length = length;
  traj.kind = "logn";
  traj.values.resize(traj.count * length);
  traj.v_values.clear();

  tables.e_log_u.assign(length, 0.0);
  tables.e_log2_u.assign(length, 0.0);
  tables.e_cross.assign(length - 1, 0.0);

  for (int m = 0; m < m_count; ++m) {
    double* path = traj.values.data() + static_cast<std::size_t>(m) * length;
    const double* w_last = cloud.weights.data() + (length - 1) * n;
    int idx = categorical_from_weights(w_last, n, rng);
    double x_next = cloud.values[(length - 1) * n + idx];
    path[length - 1] = x_next;
    tables.e_log_u[length - 1] += x_next;
    tables.e_log2_u[length - 1] += x_next * x_next;

    for (std::size_t rt = length - 1; rt-- > 0;) {
      const double* x_row = cloud.values.data() + rt * n;
      const double* lw_row = scratch.log_weights.data() + rt * n;
      for (int i = 0; i < n; ++i) {
        const double diff = x_next - x_row[i];
        scratch.logits[i] = lw_row[i] - diff * diff * inv_two_s2;
      }
      idx = categorical_from_logits(scratch.logits, n, rng);
      x_next = x_row[idx];
      path[rt] = x_next;
      tables.e_log_u[rt] += x_next;
      tables.e_log2_u[rt] += x_next * x_next;
    }
  }
  const double inv_m = 1.0 / m_count;
  for (auto& x : tables.e_log_u) x *= inv_m;
  for (auto& x : tables.e_log2_u) x *= inv_m;
  // Double-sum estimator: product of the smoothed marginal means.
  for (std::size_t e = 0; e + 1 < length; ++e) {
    tables.e_cross[e] = tables.e_log_u[e] * tables.e_log_u[e + 1];
  }
}

Trajectories backward_trajectories_logn(const ParticleCloud& cloud,
                                        const LogNParams& params, Rng& rng,
                                        int trajectories) {
  Trajectories traj;
  LogNTables tables;
  McScratch scratch;
  backward_smooth_logn_into(cloud, params, rng, trajectories, traj, tables, scratch);
  return traj;
}

LogNTables forward_backward_logn(const ReturnSeries& series, const LogNParams& params,
                                 int particles, Rng& rng, int trajectories) {
  series.validate();
  ParticleCloud cloud;
  McScratch scratch;
  forward_filter_logn_into(floored_squared_returns(series), params, particles, rng,
                           cloud, scratch);
  Trajectories traj;
  LogNTables tables;
  backward_smooth_logn_into(cloud, params, rng, trajectories, traj, tables, scratch);
  return tables;
}

LogNParams logn_mstep(const LogNTables& tables, std::size_t length) {
  if (length < 2 || tables.e_log2_u.size() != length ||
      tables.e_cross.size() + 1 != length) {
    throw config_error("logn_mstep: table lengths do not match the series length");
  }
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < length; ++e) {
    total += tables.e_log2_u[e + 1] - 2.0 * tables.e_cross[e] + tables.e_log2_u[e];
  }
  LogNParams params;
  params.step_variance = std::max(total / static_cast<double>(length), 1e-12);
  return params;
}

McFitResult fit_mc(const ReturnSeries& series, McVariant variant,
                   const McFitConfig& config, Rng& rng) {
  series.validate();
  if (config.max_rounds < 1 || !(config.tol > 0.0) || !(config.a0 > 0.0) ||
      !(config.s2_0 > 0.0)) {
    throw config_error("fit_mc: invalid configuration");
  }
  check_particles(config.particles);
  const std::vector<double> sq = floored_squared_returns(series);
  const std::size_t length = sq.size();
  const double edges = 2.0 * static_cast<double>(length - 1);

  McFitResult result;
  ParticleCloud cloud;
  McScratch scratch;
  ExpectationTables tables;
  LogNTables logn_tables;
  using clock = std::chrono::steady_clock;

  if (variant == McVariant::gam) {
    result.report.engine = "c4";
    double a = config.a0;
    for (int round = 1; round <= config.max_rounds; ++round) {
      const auto t0 = clock::now();
      forward_filter_gam_into(sq, GamChainParams{a}, config.particles, rng, cloud,
                              scratch);
      backward_smooth_gam_into(cloud, GamChainParams{a}, rng, config.trajectories,
                               result.trajectories, tables, scratch);
      const auto t1 = clock::now();
      const double g = edge_log_sum(tables);
      const double a_next = mstep_shape(g / edges, a, config.step0, config.max_inner);
      const auto t2 = clock::now();
      result.report.estep_seconds += std::chrono::duration<double>(t1 - t0).count();
      result.report.mstep_seconds += std::chrono::duration<double>(t2 - t1).count();
      result.report.a_trace.push_back(a_next);
      result.report.objective_trace.push_back(a_next * g - edges * log_gamma(a_next));
      result.report.iterations = round;
      const bool settled = std::abs(a_next - a) <= config.tol * std::abs(a);
      a = a_next;
      if (settled) {
        result.report.converged = true;
        break;
      }
    }
    result.report.params.shape_a = a;
  } else {
    result.report.engine = "c2";
    double s2 = config.s2_0;
    for (int round = 1; round <= config.max_rounds; ++round) {
      const auto t0 = clock::now();
      forward_filter_logn_into(sq, LogNParams{s2}, config.particles, rng, cloud,
                               scratch);
      backward_smooth_logn_into(cloud, LogNParams{s2}, rng, config.trajectories,
                                result.trajectories, logn_tables, scratch);
      const auto t1 = clock::now();
      const double s2_next = logn_mstep(logn_tables, length).step_variance;
      const auto t2 = clock::now();
      result.report.estep_seconds += std::chrono::duration<double>(t1 - t0).count();
      result.report.mstep_seconds += std::chrono::duration<double>(t2 - t1).count();
      result.report.a_trace.push_back(s2_next);
      // Expected random-walk log-likelihood at the refreshed variance.
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
  }
  return result;
}

}  // namespace gamchain
