#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pu/classical.hpp"
#include "pu/frequencies.hpp"

namespace pu {

/// Seeded draws for randomized property sweeps.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// n frequencies in [lo, hi] whose pairwise relative gaps exceed min_gap.
  FrequencySet distinct_frequencies(std::size_t n, double lo = 0.5, double hi = 2.0,
                                    double min_gap = 0.05);

  PhaseVector state(std::size_t dim, double amplitude = 1.0);

 private:
  std::mt19937_64 rng_;
};

}  // namespace pu
