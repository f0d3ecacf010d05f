#include "efcake/valuation.hpp"

#include <algorithm>

#include "efcake/errors.hpp"

namespace efcake {

ValuationDensity::ValuationDensity(std::vector<Fraction> breakpoints, std::vector<Fraction> densities)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
  if (breakpoints_.size() < 2 || densities_.size() + 1 != breakpoints_.size()) {
    throw ConfigError("density needs K+1 breakpoints for K segments");
  }
  if (breakpoints_.front() != Fraction(0) || breakpoints_.back() != Fraction(1)) {
    throw ConfigError("breakpoints must start at 0 and end at 1");
  }
  Fraction total;
  for (std::size_t k = 0; k < densities_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1])) throw ConfigError("breakpoints must strictly increase");
    if (densities_[k].sign() < 0) throw ConfigError("densities must be non-negative");
    total += densities_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
  }
  if (total != Fraction(1)) throw ConfigError("density integrates to " + total.to_string() + ", not 1");
}

ValuationDensity ValuationDensity::uniform() { return ValuationDensity({Fraction(0), Fraction(1)}, {Fraction(1)}); }

ValuationDensity ValuationDensity::from_weights(std::vector<Fraction> breakpoints,
                                                const std::vector<Fraction>& weights) {
  if (breakpoints.size() != weights.size() + 1) throw ConfigError("weights/breakpoints size mismatch");
  Fraction total;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * (breakpoints[k + 1] - breakpoints[k]);
  if (total.sign() <= 0) throw ConfigError("weights must have positive total");
  std::vector<Fraction> densities;
  densities.reserve(weights.size());
  for (const auto& w : weights) densities.push_back(w / total);
  return ValuationDensity(std::move(breakpoints), std::move(densities));
}

const Fraction& ValuationDensity::density_at(const Fraction& x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t k = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  if (k >= densities_.size()) k = densities_.size() - 1;
  return densities_[k];
}

}  // namespace efcake
