#pragma once

#include <cstdint>
#include <random>

#include "efcake/fraction.hpp"

namespace efcake {

/// Seeded generator with a platform-independent output sequence. The standard
/// distributions are implementation-defined, so bounded draws are done here by
/// rejection sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// True with probability p (p in [0, 1]).
  bool bernoulli(const Fraction& p);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 mix of (seed, index): independent stream per trial regardless of
/// the order trials are scheduled in.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace efcake
