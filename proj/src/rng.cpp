#include "efcake/rng.hpp"

#include <limits>

#include "efcake/errors.hpp"

namespace efcake {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw RangeError("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

bool Rng::bernoulli(const Fraction& p) {
  if (p.sign() <= 0) return false;
  if (p >= Fraction(1)) return true;
  if (!p.denominator().fits_ulong_p()) throw RangeError("probability denominator too large");
  const std::uint64_t den = p.denominator().get_ui();
  const std::uint64_t num = p.numerator().get_ui();
  return below(den) < num;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace efcake
