#include "gamchain/vi.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "gamchain/errors.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

namespace {

double mean_u(const GammaPosterior& p, std::size_t t) { return p.a_u[t] / p.b_u[t]; }
double mean_v(const GammaPosterior& p, std::size_t t) { return p.a_v[t] / p.b_v[t]; }

bool is_literal_layout(const GammaPosterior& p) {
  return p.a_v.size() == p.a_u.size();
}

// Consistent-chain coordinate update for u_t (zero-based).
void update_u_consistent(GammaPosterior& post, const std::vector<double>& half_sq,
                         double a, std::size_t t) {
  const std::size_t last = half_sq.size() - 1;
  if (t == 0) {
    post.a_u[0] = a + 1.5;
    post.b_u[0] = mean_v(post, 0) + half_sq[0];
  } else if (t == last) {
    post.a_u[last] = a + 0.5;
    post.b_u[last] = mean_v(post, last - 1) + half_sq[last];
  } else {
    post.a_u[t] = 2.0 * a + 0.5;
    post.b_u[t] = mean_v(post, t - 1) + mean_v(post, t) + half_sq[t];
  }
}

// Literal published rows: v indexed 1..T, out-of-range neighbors contribute 0.
void update_u_literal(GammaPosterior& post, const std::vector<double>& half_sq,
                      double a, std::size_t t) {
  const std::size_t length = half_sq.size();
  if (t == 0) {
    post.a_u[0] = a + 1.5;
    post.b_u[0] = mean_v(post, 1) + half_sq[0];
  } else {
    const double right = (t + 1 < length) ? mean_v(post, t + 1) : 0.0;
    post.a_u[t] = 2.0 * a + 0.5;
    post.b_u[t] = mean_v(post, t) + right + half_sq[t];
  }
}

void update_v_consistent(GammaPosterior& post, double a, std::size_t t) {
  post.a_v[t] = 2.0 * a;
  post.b_v[t] = mean_u(post, t) + mean_u(post, t + 1);
}

void update_v_literal(GammaPosterior& post, double a, std::size_t t) {
  const std::size_t length = post.a_u.size();
  if (t + 1 == length) {
    // Final dummy: shape A, single neighbor.
    post.a_v[t] = a;
    post.b_v[t] = mean_u(post, length - 2);
  } else {
    const double left = (t >= 1) ? mean_u(post, t - 1) : 0.0;
    post.a_v[t] = 2.0 * a;
    post.b_v[t] = left + mean_u(post, t);
  }
}

}  // namespace

std::vector<double> half_squared_returns(const ReturnSeries& series) {
  series.validate();
  std::vector<double> half_sq = floored_squared_returns(series);
  for (auto& x : half_sq) x *= 0.5;
  return half_sq;
}

GammaPosterior init_posterior(const ReturnSeries& series, bool paper_literal) {
  const std::vector<double> half_sq = half_squared_returns(series);
  const std::size_t length = half_sq.size();
  GammaPosterior post;
  post.a_u.assign(length, 0.5);
  post.b_u = half_sq;
  if (paper_literal) {
    post.a_v.assign(length, 0.5);
    post.b_v.resize(length);
    post.b_v[0] = half_sq[0];
    for (std::size_t i = 1; i < length; ++i) {
      post.b_v[i] = 0.5 * (half_sq[i - 1] + half_sq[i]);
    }
  } else {
    post.a_v.assign(length - 1, 0.5);
    post.b_v.resize(length - 1);
    for (std::size_t i = 0; i + 1 < length; ++i) {
      post.b_v[i] = 0.5 * (half_sq[i] + half_sq[i + 1]);
    }
  }
  return post;
}

void update_u(GammaPosterior& posterior, const ReturnSeries& series,
              const GamChainParams& params, std::size_t t, bool paper_literal) {
  params.validate();
  const std::vector<double> half_sq = half_squared_returns(series);
  if (t >= half_sq.size()) throw input_error("update_u: index out of range");
  if (paper_literal != is_literal_layout(posterior)) {
    throw config_error("update_u: posterior layout does not match the requested mode");
  }
  if (paper_literal) {
    update_u_literal(posterior, half_sq, params.shape_a, t);
  } else {
    update_u_consistent(posterior, half_sq, params.shape_a, t);
  }
}

void update_v(GammaPosterior& posterior, const GamChainParams& params, std::size_t t,
              bool paper_literal) {
  params.validate();
  if (t >= posterior.a_v.size()) throw input_error("update_v: index out of range");
  if (paper_literal != is_literal_layout(posterior)) {
    throw config_error("update_v: posterior layout does not match the requested mode");
  }
  if (paper_literal) {
    update_v_literal(posterior, params.shape_a, t);
  } else {
    update_v_consistent(posterior, params.shape_a, t);
  }
}

void estep_into(GammaPosterior& posterior, const std::vector<double>& half_sq,
                const GamChainParams& params, int sweeps, bool paper_literal,
                ExpectationTables& tables) {
  params.validate();
  if (sweeps < 1) throw config_error("estep: sweeps must be >= 1");
  const std::size_t length = half_sq.size();
  const double a = params.shape_a;

  for (int s = 0; s < sweeps; ++s) {
    if (paper_literal) {
      for (std::size_t t = 0; t < length; ++t) {
        update_u_literal(posterior, half_sq, a, t);
        update_v_literal(posterior, a, t);
      }
    } else {
      for (std::size_t t = 0; t < length; ++t) {
        update_u_consistent(posterior, half_sq, a, t);
        if (t + 1 < length) update_v_consistent(posterior, a, t);
      }
    }
  }

  tables.e_u.resize(length);
  tables.e_log_u.resize(length);
  tables.e_log_v.resize(length - 1);
  // Shapes are constants of the sweep, so the digamma values are hoisted.
  const double psi_first = digamma(a + 1.5);
  const double psi_interior = digamma(2.0 * a + 0.5);
  const double psi_last = paper_literal ? psi_interior : digamma(a + 0.5);
  const double psi_v = digamma(2.0 * a);
  for (std::size_t t = 0; t < length; ++t) {
    tables.e_u[t] = posterior.a_u[t] / posterior.b_u[t];
    const double psi =
        (t == 0) ? psi_first : (t + 1 == length ? psi_last : psi_interior);
    tables.e_log_u[t] = psi - std::log(posterior.b_u[t]);
  }
  if (paper_literal) {
    // Structural dummies are v_2..v_T; the final one carries shape A.
    const double psi_a = digamma(a);
    for (std::size_t e = 0; e + 1 < length; ++e) {
      const double psi = (e + 2 == length) ? psi_a : psi_v;
      tables.e_log_v[e] = psi - std::log(posterior.b_v[e + 1]);
    }
  } else {
    for (std::size_t e = 0; e + 1 < length; ++e) {
      tables.e_log_v[e] = psi_v - std::log(posterior.b_v[e]);
    }
  }
}

ExpectationTables estep(GammaPosterior& posterior, const ReturnSeries& series,
                        const GamChainParams& params, int sweeps, bool paper_literal) {
  if (paper_literal != is_literal_layout(posterior)) {
    throw config_error("estep: posterior layout does not match the requested mode");
  }
  const std::vector<double> half_sq = half_squared_returns(series);
  ExpectationTables tables;
  estep_into(posterior, half_sq, params, sweeps, paper_literal, tables);
  return tables;
}

double elbo(const GammaPosterior& posterior, const ReturnSeries& series,
            const GamChainParams& params) {
  params.validate();
  const std::vector<double> half_sq = half_squared_returns(series);
  const std::size_t length = half_sq.size();
  if (posterior.a_u.size() != length || posterior.a_v.size() != length - 1) {
    throw config_error("elbo: defined for the consistent-chain posterior layout only");
  }
  const double a = params.shape_a;
  const double lg_a = log_gamma(a);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);

  double bound = 0.0;
  std::vector<double> e_u(length), e_log_u(length);
  for (std::size_t t = 0; t < length; ++t) {
    const double au = posterior.a_u[t];
    const double bu = posterior.b_u[t];
    e_u[t] = au / bu;
    e_log_u[t] = digamma(au) - std::log(bu);
    // Observation term E[log N(dy_t; 0, 1/u_t)].
    bound += 0.5 * e_log_u[t] - half_sq[t] * e_u[t] - half_log_2pi;
    // Entropy of q(u_t).
    bound += au - std::log(bu) + log_gamma(au) + (1.0 - au) * digamma(au);
  }
  for (std::size_t t = 0; t + 1 < length; ++t) {
    const double av = posterior.a_v[t];
    const double bv = posterior.b_v[t];
    const double e_v = av / bv;
    const double e_log_v = digamma(av) - std::log(bv);
    // Edge u_t -> v_t and edge v_t -> u_{t+1}.
    bound += a * e_log_u[t] + (a - 1.0) * e_log_v - e_u[t] * e_v - lg_a;
    bound += a * e_log_v + (a - 1.0) * e_log_u[t + 1] - e_v * e_u[t + 1] - lg_a;
    // Entropy of q(v_t).
    bound += av - std::log(bv) + log_gamma(av) + (1.0 - av) * digamma(av);
  }
  return bound;
}

double edge_log_sum(const ExpectationTables& tables) {
  const std::size_t length = tables.e_log_u.size();
  if (tables.e_log_v.size() + 1 != length) {
    throw config_error("edge_log_sum: inconsistent table lengths");
  }
  double g = 0.0;
  for (std::size_t e = 0; e + 1 < length; ++e) {
    g += tables.e_log_u[e] + 2.0 * tables.e_log_v[e] + tables.e_log_u[e + 1];
  }
  return g;
}

double em_gradient(const ExpectationTables& tables, const GamChainParams& params,
                   std::size_t length) {
  params.validate();
  if (length < 2 || tables.e_log_u.size() != length) {
    throw config_error("em_gradient: table lengths do not match the series length");
  }
  const double edges = 2.0 * static_cast<double>(length - 1);
  return edge_log_sum(tables) - edges * digamma(params.shape_a);
}

double q_objective(const ExpectationTables& tables, const GamChainParams& params,
                   std::size_t length) {
  params.validate();
  if (length < 2 || tables.e_log_u.size() != length) {
    throw config_error("q_objective: table lengths do not match the series length");
  }
  const double edges = 2.0 * static_cast<double>(length - 1);
  return params.shape_a * edge_log_sum(tables) - edges * log_gamma(params.shape_a);
}

double mstep_shape(double g_per_edge, double a_start, double step0, int max_inner) {
  if (!std::isfinite(g_per_edge)) {
    throw numeric_error("mstep_shape: non-finite expectation sum");
  }
  if (!(a_start > 0.0) || !std::isfinite(a_start)) {
    throw config_error("mstep_shape: starting shape must be positive");
  }
  double theta = std::log(a_start);
  double a = a_start;
  const auto objective = [g_per_edge](double x) { return x * g_per_edge - log_gamma(x); };
  double q = objective(a);
  for (int iter = 0; iter < max_inner; ++iter) {
    const double grad = g_per_edge - digamma(a);
    if (std::abs(grad) <= 1e-13 * (1.0 + std::abs(g_per_edge))) break;
    const double grad_theta = a * grad;  // ascent runs on log A
    double lambda = step0;
    bool accepted = false;
    double theta_next = theta;
    double a_next = a;
    double q_next = q;
    while (lambda >= 1e-12) {
      const double candidate_theta = theta + lambda * grad_theta;
      if (std::abs(candidate_theta) < 50.0) {
        const double candidate_a = std::exp(candidate_theta);
        const double candidate_q = objective(candidate_a);
        if (std::isfinite(candidate_q) && candidate_q > q) {
          theta_next = candidate_theta;
          a_next = candidate_a;
          q_next = candidate_q;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    const double delta = std::abs(a_next - a);
    theta = theta_next;
    a = a_next;
    q = q_next;
    if (delta <= 1e-10 * a) break;
  }
  return a;
}

FitResult fit(const ReturnSeries& series, const FitConfig& config) {
  series.validate();
  if (config.tol_a <= 0.0 || config.max_rounds < 1 || config.sweeps < 1 ||
      !(config.a0 > 0.0)) {
    throw config_error("fit: invalid configuration");
  }
  const std::vector<double> half_sq = half_squared_returns(series);
  const std::size_t length = half_sq.size();
  const double edges = 2.0 * static_cast<double>(length - 1);

  FitResult result;
  result.posterior = init_posterior(series, config.paper_literal);
  result.report.engine = config.paper_literal ? "c3-literal" : "c3";

  double a = config.a0;
  using clock = std::chrono::steady_clock;
  for (int round = 1; round <= config.max_rounds; ++round) {
    const auto t0 = clock::now();
    estep_into(result.posterior, half_sq, GamChainParams{a}, config.sweeps,
               config.paper_literal, result.tables);
    const auto t1 = clock::now();
    const double g = edge_log_sum(result.tables);
    const double a_next =
        mstep_shape(g / edges, a, config.step0, config.max_inner);
    const auto t2 = clock::now();
    result.report.estep_seconds += std::chrono::duration<double>(t1 - t0).count();
    result.report.mstep_seconds += std::chrono::duration<double>(t2 - t1).count();
    result.report.a_trace.push_back(a_next);
    result.report.objective_trace.push_back(a_next * g - edges * log_gamma(a_next));
    result.report.iterations = round;
    const bool settled = std::abs(a_next - a) <= config.tol_a * std::abs(a);
    a = a_next;
    if (settled) {
      result.report.converged = true;
      break;
    }
  }
  result.report.params.shape_a = a;
  return result;
}

}  // namespace gamchain
