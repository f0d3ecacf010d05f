#include "efcake/cake.hpp"

#include <algorithm>
#include <set>

#include "efcake/errors.hpp"

namespace efcake {

namespace {

// Walks p ∩ segments in order, calling fn(lo, hi, density) for each overlap.
template <typename Fn>
void for_each_overlap(const ValuationDensity& v, const PieceSet& p, Fn&& fn) {
  const auto& bps = v.breakpoints();
  std::size_t k = 0;
  for (const auto& iv : p.intervals()) {
    while (k + 1 < bps.size() && bps[k + 1] <= iv.lo) ++k;
    std::size_t s = k;
    Fraction lo = iv.lo;
    while (s + 1 < bps.size() && lo < iv.hi) {
      const Fraction hi = min(iv.hi, bps[s + 1]);
      if (lo < hi) {
        if (fn(lo, hi, v.densities()[s])) return;
      }
      lo = hi;
      if (lo < iv.hi) ++s;
    }
    k = s;
  }
}

}  // namespace

Fraction measure(const ValuationDensity& v, const PieceSet& p) {
  Fraction total;
  for_each_overlap(v, p, [&](const Fraction& lo, const Fraction& hi, const Fraction& d) {
    if (!d.is_zero()) total += d * (hi - lo);
    return false;
  });
  return total;
}

Fraction quantile_cut(const ValuationDensity& v, const PieceSet& p, const Fraction& target) {
  if (target.sign() < 0) throw RangeError("quantile target " + target.to_string() + " is negative");
  if (target.is_zero()) return Fraction(0);
  Fraction acc;
  Fraction answer;
  bool found = false;
  for_each_overlap(v, p, [&](const Fraction& lo, const Fraction& hi, const Fraction& d) {
    if (d.is_zero()) return false;
    const Fraction mass = d * (hi - lo);
    if (acc + mass >= target) {
      answer = lo + (target - acc) / d;
      found = true;
      return true;
    }
    acc += mass;
    return false;
  });
  if (!found) {
    throw RangeError("quantile target " + target.to_string() + " exceeds piece value " + acc.to_string());
  }
  return answer;
}

std::vector<Fraction> equal_cut_points(const ValuationDensity& v, const PieceSet& p, std::size_t parts) {
  if (parts == 0) throw RangeError("cannot split into zero parts");
  const Fraction total = measure(v, p);
  std::vector<Fraction> points;
  points.reserve(parts - 1);
  for (std::size_t k = 1; k < parts; ++k) {
    points.push_back(quantile_cut(v, p, total * Fraction(static_cast<std::int64_t>(k), static_cast<std::int64_t>(parts))));
  }
  return points;
}

std::vector<PieceSet> split_at(const PieceSet& p, const std::vector<Fraction>& points) {
  std::vector<PieceSet> out;
  out.reserve(points.size() + 1);
  PieceSet rest = p;
  for (const auto& x : points) {
    out.push_back(rest.below(x));
    rest = rest.at_or_above(x);
  }
  out.push_back(std::move(rest));
  return out;
}

std::vector<PieceSet> split_equal(const ValuationDensity& v, const PieceSet& p, std::size_t parts) {
  return split_at(p, equal_cut_points(v, p, parts));
}

std::vector<Interval> refine(const PieceSet& p, std::span<const ValuationDensity> vs) {
  std::set<Fraction> cuts;
  for (const auto& v : vs) {
    for (std::size_t k = 1; k + 1 < v.breakpoints().size(); ++k) cuts.insert(v.breakpoints()[k]);
  }
  std::vector<Interval> atoms;
  for (const auto& iv : p.intervals()) {
    Fraction lo = iv.lo;
    for (auto it = cuts.upper_bound(iv.lo); it != cuts.end() && *it < iv.hi; ++it) {
      atoms.push_back({lo, *it});
      lo = *it;
    }
    atoms.push_back({lo, iv.hi});
  }
  return atoms;
}

std::vector<PieceSet> perfect_partition(std::span<const ValuationDensity> vs, const PieceSet& p,
                                        const std::vector<Fraction>& ratios) {
  if (ratios.empty()) throw RangeError("perfect_partition needs at least one ratio");
  Fraction sum;
  for (const auto& r : ratios) {
    if (r.sign() < 0) throw RangeError("negative partition ratio");
    sum += r;
  }
  if (sum != Fraction(1)) throw RangeError("partition ratios sum to " + sum.to_string());

  std::vector<std::vector<Interval>> slices(ratios.size());
  for (const auto& atom : refine(p, vs)) {
    const Fraction len = atom.length();
    Fraction cursor = atom.lo;
    std::size_t last = ratios.size();
    while (last > 0 && ratios[last - 1].is_zero()) --last;
    for (std::size_t r = 0; r < ratios.size(); ++r) {
      if (ratios[r].is_zero()) continue;
      // The final non-zero slice ends exactly at the atom boundary.
      const Fraction hi = (r + 1 == last) ? atom.hi : cursor + ratios[r] * len;
      slices[r].push_back({cursor, hi});
      cursor = hi;
    }
  }
  std::vector<PieceSet> shares;
  shares.reserve(ratios.size());
  for (auto& s : slices) shares.push_back(PieceSet::from_intervals(std::move(s)));
  return shares;
}

std::size_t new_cut_points(const PieceSet& input, const std::vector<PieceSet>& outputs) {
  std::set<Fraction> old_points;
  for (auto& x : input.endpoints()) old_points.insert(std::move(x));
  std::set<Fraction> fresh;
  for (const auto& piece : outputs) {
    for (auto& x : piece.endpoints()) {
      if (!old_points.contains(x)) fresh.insert(std::move(x));
    }
  }
  return fresh.size();
}

}  // namespace efcake
