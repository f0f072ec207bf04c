#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hyperion {

// Seeded, portable randomness for workload generation: mt19937_64 with
// explicit inverse-CDF sampling, so identical seeds reproduce the same
// streams on any platform (std::*_distribution is not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate, via -log(1 - u) / rate.
  double next_exponential(double rate) {
    return -std::log1p(-next_unit()) / rate;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Uniform integer in [lo, hi] (small ranges; modulo bias is irrelevant
  // for test-instance generation).
  int64_t next_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(engine_() % static_cast<uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hyperion
