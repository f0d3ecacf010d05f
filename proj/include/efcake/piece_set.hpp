#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "efcake/fraction.hpp"

namespace efcake {

/// Half-open span [lo, hi) of the unit cake.
struct Interval {
  Fraction lo;
  Fraction hi;

  Fraction length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of disjoint half-open rational intervals inside [0, 1).
///
/// The representation is canonical: intervals are sorted, non-empty, and no two
/// of them touch, so two PieceSets covering the same points compare equal.
class PieceSet {
 public:
  PieceSet() = default;

  static PieceSet whole();
  static PieceSet span(const Fraction& lo, const Fraction& hi);
  /// Accepts intervals in any order, possibly overlapping or touching; they are
  /// merged into canonical form. Throws RangeError when a span leaves [0, 1].
  static PieceSet from_intervals(std::vector<Interval> intervals);
  /// Parses the "lo..hi,lo..hi" form produced by to_string(); "empty" is the
  /// empty set.
  static PieceSet parse(std::string_view text);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  Fraction length() const;
  std::vector<Fraction> endpoints() const;

  PieceSet unite(const PieceSet& other) const;
  PieceSet intersect(const PieceSet& other) const;
  PieceSet subtract(const PieceSet& other) const;
  /// this ∩ [0, x)
  PieceSet below(const Fraction& x) const;
  /// this ∩ [x, 1)
  PieceSet at_or_above(const Fraction& x) const;

  bool contains(const PieceSet& other) const;
  bool disjoint(const PieceSet& other) const;

  std::string to_string() const;

  friend bool operator==(const PieceSet&, const PieceSet&) = default;

 private:
  explicit PieceSet(std::vector<Interval> canonical) : intervals_(std::move(canonical)) {}
  std::vector<Interval> intervals_;
};

/// Union of a list of pieces.
PieceSet unite_all(const std::vector<PieceSet>& pieces);

}  // namespace efcake
