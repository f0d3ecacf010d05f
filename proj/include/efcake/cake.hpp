#pragma once

#include <span>
#include <vector>

#include "efcake/fraction.hpp"
#include "efcake/piece_set.hpp"
#include "efcake/valuation.hpp"

namespace efcake {

/// Value of a piece under a density: sum of density-weighted lengths.
Fraction measure(const ValuationDensity& v, const PieceSet& p);

/// Leftmost x with measure(v, p ∩ [0, x)) == target. Throws RangeError when
/// target is negative or exceeds measure(v, p).
Fraction quantile_cut(const ValuationDensity& v, const PieceSet& p, const Fraction& target);

/// The interior cut points (in order) that split p into `parts` pieces of
/// equal value under v.
std::vector<Fraction> equal_cut_points(const ValuationDensity& v, const PieceSet& p, std::size_t parts);

/// Splits p at the given increasing points: piece k = p ∩ [x_{k-1}, x_k).
std::vector<PieceSet> split_at(const PieceSet& p, const std::vector<Fraction>& points);

/// Partition of p into `parts` pieces each worth exactly measure(v, p)/parts.
std::vector<PieceSet> split_equal(const ValuationDensity& v, const PieceSet& p, std::size_t parts);

/// Intervals of p cut at every breakpoint of every density: on each returned
/// atom all densities are constant.
std::vector<Interval> refine(const PieceSet& p, std::span<const ValuationDensity> vs);

/// Referee construction: slices every atom of p proportionally to `ratios`, so
/// each listed valuation measures share r at exactly ratios[r] * measure(v, p).
/// Ratios must be non-negative and sum to exactly 1.
std::vector<PieceSet> perfect_partition(std::span<const ValuationDensity> vs, const PieceSet& p,
                                        const std::vector<Fraction>& ratios);

/// Number of boundary points of `outputs` that are not boundary points of
/// `input`; used to charge referee-made cuts.
std::size_t new_cut_points(const PieceSet& input, const std::vector<PieceSet>& outputs);

}  // namespace efcake
