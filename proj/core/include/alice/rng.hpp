#pragma once

#include <cstdint>

#include "alice/error.hpp"

namespace alice {

/// Seeded pseudo-random stream. The generator is xoshiro256** (Blackman &
/// Vigna), state-initialized with splitmix64, and the floating-point mappings
/// below are hand-rolled so that every draw sequence is bit-stable across
/// platforms and standard-library versions. Identical seeds give identical
/// sequences.
///
/// Single-owner mutable state: an Rng may be moved between threads but must
/// never be shared concurrently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Next raw 64-bit word of the stream.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 bits of precision.
  double unit();

  /// Uniform double in [lo, hi). Throws InvalidRange unless lo < hi.
  double uniform(double lo, double hi);

  /// Uniform index in [0, n). Throws InvalidRange when n == 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal draw via Box-Muller (two stream words per call).
  double normal();

  bool bernoulli(double p) { return unit() < p; }

  /// Deterministically derived child stream (consumes one word of this one).
  Rng fork() { return Rng(next_u64()); }

 private:
  std::uint64_t state_[4];
};

}  // namespace alice
