// Scalar-function micro-timing: mean per-evaluation cost of a named function
// over pre-generated lognormal arguments, with an empty-loop baseline
// subtracted.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gamchain {

struct FunctionTimingRecord {
  std::string function_name;
  double mean_eval_time = 0.0;  // seconds per evaluation, baseline-subtracted
  std::uint64_t sample_count = 0;
};

// name is one of: add, mul, exp, log, pow, gamma, digamma, lambert_w.
// evaluations must be at least 10^6; arguments are LogNormal(0,1), drawn once
// into a fixed-size buffer and cycled. Binary functions consume adjacent
// buffer entries as their two operands.
FunctionTimingRecord time_function(std::string_view name, std::uint64_t evaluations);

}  // namespace gamchain
