// Closed-form coordinate variational state estimation for the gamma chain,
// plus the EM objective, gradient, and shape-parameter fit loop.
//
// Default topology is the internally consistent chain
//   u_1 -v_1- u_2 -v_2- ... -v_{T-1}- u_T
// with boundary shapes A+3/2 and A+1/2, interior shape 2A+1/2, and dummy-node
// shape 2A. The literal mode reproduces the published update rows verbatim
// (v indexed 1..T, zero contribution from out-of-range neighbors, dangling
// final dummy with shape A); it exists for comparison runs only.
#pragma once

#include <cstddef>
#include <vector>

#include "gamchain/types.hpp"

namespace gamchain {

struct ExpectationTables {
  std::vector<double> e_u;      // E[u_t], length T
  std::vector<double> e_log_u;  // E[log u_t], length T
  std::vector<double> e_log_v;  // E[log v] per structural edge, length T-1
};

// max(dy_t^2, floor) / 2 for every t; the b-rate contribution of each return.
std::vector<double> half_squared_returns(const ReturnSeries& series);

// All u-nodes start at Ga(1/2, dy_t^2/2); each v-node starts at shape 1/2
// with rate equal to the mean of its neighbors' initial rates.
GammaPosterior init_posterior(const ReturnSeries& series, bool paper_literal = false);

// Single-site coordinate updates (convenience form; recomputes the return
// floor on each call). t is zero-based.
void update_u(GammaPosterior& posterior, const ReturnSeries& series,
              const GamChainParams& params, std::size_t t, bool paper_literal = false);
void update_v(GammaPosterior& posterior, const GamChainParams& params, std::size_t t,
              bool paper_literal = false);

// Forward-ordered coordinate sweeps (u_t then v_t at each position), then the
// expectation tables. Allocation-free when `tables` is presized.
void estep_into(GammaPosterior& posterior, const std::vector<double>& half_sq,
                const GamChainParams& params, int sweeps, bool paper_literal,
                ExpectationTables& tables);

ExpectationTables estep(GammaPosterior& posterior, const ReturnSeries& series,
                        const GamChainParams& params, int sweeps = 1,
                        bool paper_literal = false);

// Evidence lower bound for the consistent topology (observation terms, one
// gamma cross-entropy per edge, gamma entropies; the flat prior on u_1
// contributes nothing). Throws config_error for a literal-layout posterior.
double elbo(const GammaPosterior& posterior, const ReturnSeries& series,
            const GamChainParams& params);

// Sum over the 2(T-1) edges of E[log rate] + E[log child].
double edge_log_sum(const ExpectationTables& tables);

// d/dA of the expected complete-data shape objective:
//   Q(A) = A G - 2(T-1) lgamma(A),  grad = G - 2(T-1) psi0(A).
double em_gradient(const ExpectationTables& tables, const GamChainParams& params,
                   std::size_t length);

double q_objective(const ExpectationTables& tables, const GamChainParams& params,
                   std::size_t length);

// Maximizes g_per_edge * A - lgamma(A) (Q normalized by 2(T-1), same argmax)
// by backtracking gradient ascent on log A from a_start: initial step 0.1,
// halve until the objective increases, stop at stationarity or max_inner.
double mstep_shape(double g_per_edge, double a_start, double step0 = 0.1,
                   int max_inner = 100);

struct FitConfig {
  double tol_a = 1e-6;       // relative |dA| stopping rule across EM rounds
  int max_rounds = 1000;
  int sweeps = 1;            // coordinate sweeps per E-step
  bool paper_literal = false;
  double a0 = 1.0;           // EM initialization
  double step0 = 0.1;
  int max_inner = 100;
};

struct FitResult {
  FitReport report;
  GammaPosterior posterior;
  ExpectationTables tables;
};

// EM: E-step sweeps then shape M-step until the A trace settles. Round times
// are recorded into the report (the CLI decides whether to serialize them).
FitResult fit(const ReturnSeries& series, const FitConfig& config = {});

}  // namespace gamchain
