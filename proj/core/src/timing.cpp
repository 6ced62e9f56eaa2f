#include "gamchain/timing.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "gamchain/errors.hpp"
#include "gamchain/rng.hpp"
#include "gamchain/special.hpp"

namespace gamchain {

namespace {

constexpr std::uint64_t kBufSize = std::uint64_t{1} << 22;
constexpr std::uint64_t kBufMask = kBufSize - 1;
constexpr std::uint64_t kArgSeed = 0x5eed0a21u;

const std::vector<double>& argument_buffer() {
  static const std::vector<double> buf = [] {
    Rng rng(kArgSeed);
    std::vector<double> v(kBufSize);
    for (auto& x : v) x = rng.lognormal(0.0, 1.0);
    return v;
  }();
  return buf;
}

// Keeps acc live in a register each iteration so the loop is neither
// vectorized nor folded away.
inline void keep(double& acc) { asm volatile("" : "+x"(acc)); }

template <typename Body>
double timed_loop(std::uint64_t evaluations, Body body) {
  const auto& buf = argument_buffer();
  double acc = 0.0;
  // Warm-up pass, excluded from the measurement.
  for (std::uint64_t i = 0; i < evaluations / 16 + 1; ++i) {
    acc += body(buf[i & kBufMask], buf[(i + 1) & kBufMask]);
    keep(acc);
  }
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < evaluations; ++i) {
    acc += body(buf[i & kBufMask], buf[(i + 1) & kBufMask]);
    keep(acc);
  }
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

FunctionTimingRecord time_function(std::string_view name, std::uint64_t evaluations) {
  if (evaluations < 1000000) {
    throw config_error("time_function: evaluations must be at least 1e6");
  }
  const double baseline =
      timed_loop(evaluations, [](double x, double) { return x; });
  double elapsed;
  if (name == "add") {
    elapsed = timed_loop(evaluations, [](double x, double y) { return x + y; });
  } else if (name == "mul") {
    elapsed = timed_loop(evaluations, [](double x, double y) { return x * y; });
  } else if (name == "exp") {
    elapsed = timed_loop(evaluations, [](double x, double) { return std::exp(x); });
  } else if (name == "log") {
    elapsed = timed_loop(evaluations, [](double x, double) { return std::log(x); });
  } else if (name == "pow") {
    elapsed =
        timed_loop(evaluations, [](double x, double y) { return std::pow(x, y); });
  } else if (name == "gamma") {
    elapsed =
        timed_loop(evaluations, [](double x, double) { return std::tgamma(x); });
  } else if (name == "digamma") {
    elapsed =
        timed_loop(evaluations, [](double x, double) { return polygamma(0, x); });
  } else if (name == "lambert_w") {
    elapsed =
        timed_loop(evaluations, [](double x, double) { return lambert_w0(x); });
  } else {
    throw config_error("time_function: unknown function name '" + std::string(name) +
                       "'");
  }
  FunctionTimingRecord record;
  record.function_name = std::string(name);
  record.mean_eval_time =
      std::max((elapsed - baseline) / static_cast<double>(evaluations), 1e-13);
  record.sample_count = evaluations;
  return record;
}

}  // namespace gamchain
