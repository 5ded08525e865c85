#pragma once

#include <cstdint>

#include "punc/matrix.hpp"

namespace punc {

// Deterministic 64-bit generator: xoshiro256** seeded through splitmix64,
// Gaussian draws via Box-Muller on the uniform stream. Generated circuit
// files must be byte-identical for a fixed seed, so every constant in the
// stream lives here rather than in a standard-library engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal.
  double normal();

  // (normal + i normal) / sqrt(2), unit variance.
  cplx complex_normal();

  // Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);

  bool coin() { return uniform_index(2) == 1; }

 private:
  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace punc
