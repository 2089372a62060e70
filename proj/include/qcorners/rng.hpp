#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qcorners {

/// Seedable generator with a bit stream fixed by the C++ standard
/// (std::mt19937_64). Conversions to doubles and bounded integers are done
/// here rather than through <random> distributions, whose output is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Per-task seed: hash of (seed, label). Stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace qcorners
