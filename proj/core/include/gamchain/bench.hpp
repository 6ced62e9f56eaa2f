// End-to-end estimation benchmark: fixed-iteration EM loops per engine and
// sequence length on prefixes of one shared series, with the E-step and
// M-step timed separately. Single-threaded; timed loops reuse preallocated
// workspaces so they do not allocate.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gamchain/types.hpp"

namespace gamchain {

struct BenchConfig {
  std::vector<std::string> engines{"c1", "c2", "c3"};  // any of c1,c2,c3,c4
  std::vector<std::size_t> lengths{1000, 10000, 100000};
  int particles = 2;
  std::size_t iterations = 1000;
  std::size_t repetitions = 3;  // median by total time is reported
  std::uint64_t seed = 42;
  double shape_a0 = 1.0;
  double s2_0 = 1.0;
};

// One report per engine x length. Each repetition runs one untimed warm-up
// round and then `iterations` EM rounds; the median repetition (by total
// time) is kept. The base series must cover the largest requested length.
std::vector<BenchReport> run_benchmark(const ReturnSeries& base, const BenchConfig& config);

}  // namespace gamchain
