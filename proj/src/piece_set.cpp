#include "efcake/piece_set.hpp"

#include <algorithm>

#include "efcake/errors.hpp"

namespace efcake {

namespace {

const Fraction kZero{0};
const Fraction kOne{1};

// Input must be sorted by lo with non-empty spans; merges overlaps and touches.
std::vector<Interval> merge_sorted(std::vector<Interval> in) {
  std::vector<Interval> out;
  out.reserve(in.size());
  for (auto& iv : in) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (out.back().hi < iv.hi) out.back().hi = std::move(iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

}  // namespace

PieceSet PieceSet::whole() { return PieceSet({Interval{kZero, kOne}}); }

PieceSet PieceSet::span(const Fraction& lo, const Fraction& hi) {
  return from_intervals({Interval{lo, hi}});
}

PieceSet PieceSet::from_intervals(std::vector<Interval> intervals) {
  std::vector<Interval> kept;
  kept.reserve(intervals.size());
  for (auto& iv : intervals) {
    if (iv.lo < kZero || iv.hi > kOne) {
      throw RangeError("interval " + iv.lo.to_string() + ".." + iv.hi.to_string() + " leaves the cake");
    }
    if (iv.lo < iv.hi) kept.push_back(std::move(iv));
  }
  const bool sorted = std::is_sorted(kept.begin(), kept.end(),
                                     [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  if (!sorted) {
    std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  }
  return PieceSet(merge_sorted(std::move(kept)));
}

PieceSet PieceSet::parse(std::string_view text) {
  if (text == "empty") return {};
  std::vector<Interval> spans;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) throw ParseError("expected lo..hi", start + 1);
    Fraction lo, hi;
    try {
      lo = Fraction::parse(item.substr(0, dots));
      hi = Fraction::parse(item.substr(dots + 2));
    } catch (const ParseError& e) {
      throw ParseError("bad fraction in piece set", start + e.position());
    }
    if (!(lo < hi)) throw ParseError("empty or reversed span", start + 1);
    spans.push_back({lo, hi});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return from_intervals(std::move(spans));
}

Fraction PieceSet::length() const {
  Fraction total;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

std::vector<Fraction> PieceSet::endpoints() const {
  std::vector<Fraction> out;
  out.reserve(intervals_.size() * 2);
  for (const auto& iv : intervals_) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

PieceSet PieceSet::unite(const PieceSet& other) const {
  std::vector<Interval> all;
  all.reserve(intervals_.size() + other.intervals_.size());
  std::merge(intervals_.begin(), intervals_.end(), other.intervals_.begin(), other.intervals_.end(),
             std::back_inserter(all), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return PieceSet(merge_sorted(std::move(all)));
}

PieceSet PieceSet::intersect(const PieceSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < intervals_.size() && j < other.intervals_.size()) {
    const auto& a = intervals_[i];
    const auto& b = other.intervals_[j];
    const Fraction& lo = max(a.lo, b.lo);
    const Fraction& hi = min(a.hi, b.hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return PieceSet(std::move(out));
}

PieceSet PieceSet::subtract(const PieceSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& a : intervals_) {
    Fraction cursor = a.lo;
    while (j < other.intervals_.size() && other.intervals_[j].hi <= cursor) ++j;
    std::size_t k = j;
    while (k < other.intervals_.size() && other.intervals_[k].lo < a.hi) {
      const auto& b = other.intervals_[k];
      if (cursor < b.lo) out.push_back({cursor, b.lo});
      if (cursor < b.hi) cursor = b.hi;
      if (!(cursor < a.hi)) break;
      ++k;
    }
    if (cursor < a.hi) out.push_back({cursor, a.hi});
  }
  return PieceSet(std::move(out));
}

PieceSet PieceSet::below(const Fraction& x) const {
  if (x <= kZero) return {};
  return intersect(PieceSet({Interval{kZero, min(x, kOne)}}));
}

PieceSet PieceSet::at_or_above(const Fraction& x) const {
  if (x >= kOne) return {};
  return intersect(PieceSet({Interval{max(x, kZero), kOne}}));
}

bool PieceSet::contains(const PieceSet& other) const { return other.subtract(*this).empty(); }

bool PieceSet::disjoint(const PieceSet& other) const { return intersect(other).empty(); }

std::string PieceSet::to_string() const {
  if (intervals_.empty()) return "empty";
  std::string out;
  for (const auto& iv : intervals_) {
    if (!out.empty()) out += ',';
    out += iv.lo.to_string();
    out += "..";
    out += iv.hi.to_string();
  }
  return out;
}

PieceSet unite_all(const std::vector<PieceSet>& pieces) {
  std::vector<Interval> all;
  for (const auto& p : pieces) all.insert(all.end(), p.intervals().begin(), p.intervals().end());
  return PieceSet::from_intervals(std::move(all));
}

}  // namespace efcake
