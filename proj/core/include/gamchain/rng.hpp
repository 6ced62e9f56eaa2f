// Deterministic pseudo-random generator: xoshiro256++ with splitmix64 seeding.
// Every stochastic routine in the library takes an explicit Rng& so that a
// fixed seed reproduces results bit-for-bit on the same build.
#pragma once

#include <array>
#include <cstdint>

namespace gamchain {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();
  // Standard normal via Box-Muller; the partner value is cached.
  double normal();
  // exp(mu + sigma * Z).
  double lognormal(double mu, double sigma);

 private:
  std::array<std::uint64_t, 4> state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace gamchain
