#pragma once

#include <cstdint>

namespace awopt {

// Deterministic RNG used everywhere in the library. All draws are defined in
// terms of the raw 64-bit stream so results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev);
  // Uniform integer in [0, n). n must be > 0.
  std::uint32_t uniform_int(std::uint32_t n);
  // Bernoulli with success probability p.
  bool bernoulli(double p);

  // Derive an independent child stream; deterministic in (state of parent, tag).
  Rng split(std::uint64_t tag);

 private:
  std::uint64_t state_;
};

// SplitMix64 step, also used for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace awopt
