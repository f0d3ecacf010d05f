#pragma once

#include <vector>

#include "efcake/fraction.hpp"

namespace efcake {

/// A player's private measure on [0, 1]: a piecewise-constant, non-negative
/// density whose integral over the whole cake is exactly 1.
class ValuationDensity {
 public:
  struct Segment {
    Fraction lo;
    Fraction hi;
    Fraction density;
  };

  /// breakpoints must run 0 = b0 < b1 < ... < bK = 1 and there must be K
  /// densities. Throws ConfigError otherwise, or when the total is not 1.
  ValuationDensity(std::vector<Fraction> breakpoints, std::vector<Fraction> densities);

  static ValuationDensity uniform();
  /// Builds a density from unnormalized non-negative weights on the given
  /// breakpoints, rescaling so the whole cake is worth 1.
  static ValuationDensity from_weights(std::vector<Fraction> breakpoints, const std::vector<Fraction>& weights);

  const std::vector<Fraction>& breakpoints() const { return breakpoints_; }
  const std::vector<Fraction>& densities() const { return densities_; }
  std::size_t segment_count() const { return densities_.size(); }
  Segment segment(std::size_t k) const { return {breakpoints_[k], breakpoints_[k + 1], densities_[k]}; }

  /// Density on the segment containing x (x in [0, 1)).
  const Fraction& density_at(const Fraction& x) const;

  friend bool operator==(const ValuationDensity&, const ValuationDensity&) = default;

 private:
  std::vector<Fraction> breakpoints_;
  std::vector<Fraction> densities_;
};

}  // namespace efcake
