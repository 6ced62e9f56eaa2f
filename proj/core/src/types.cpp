#include "gamchain/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamchain/errors.hpp"

namespace gamchain {

void ReturnSeries::validate() const {
  if (returns.size() < 2) {
    throw input_error("return series needs at least 2 observations, got " +
                      std::to_string(returns.size()));
  }
  for (std::size_t t = 0; t < returns.size(); ++t) {
    if (!std::isfinite(returns[t])) {
      throw input_error("return series has a non-finite value at index " +
                        std::to_string(t));
    }
  }
}

void GamChainParams::validate() const {
  if (!std::isfinite(shape_a) || shape_a <= 0.0) {
    throw config_error("shape parameter A must be positive and finite");
  }
}

void LogNParams::validate() const {
  if (!std::isfinite(step_variance) || step_variance <= 0.0) {
    throw config_error("step variance S^2 must be positive and finite");
  }
}

double squared_return_floor(const std::vector<double>& returns) {
  std::vector<double> sq(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) sq[t] = returns[t] * returns[t];
  std::vector<double> sorted = sq;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double median = (n % 2 == 1) ? sorted[n / 2]
                               : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (median <= 0.0) {
    // More than half the returns are exactly zero; use the smallest positive
    // squared return instead.
    median = 0.0;
    for (double s : sorted) {
      if (s > 0.0) {
        median = s;
        break;
      }
    }
    if (median <= 0.0) {
      throw input_error("all returns are zero; the series carries no signal");
    }
  }
  return 1e-12 * median;
}

std::vector<double> floored_squared_returns(const ReturnSeries& series) {
  const double floor_value = squared_return_floor(series.returns);
  std::vector<double> sq(series.returns.size());
  for (std::size_t t = 0; t < series.returns.size(); ++t) {
    const double s = series.returns[t] * series.returns[t];
    // The floor exists to keep exact zero returns from producing zero rates;
    // genuine small returns carry real scale information and pass through.
    sq[t] = (s == 0.0) ? floor_value : s;
  }
  return sq;
}

}  // namespace gamchain
