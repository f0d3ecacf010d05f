#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efcake/agents.hpp"
#include "efcake/allocation.hpp"
#include "efcake/fraction.hpp"

namespace efcake {

/// Outcome of one exact check. `margin` is the worst slack found: non-negative
/// on success, negative by the size of the worst violation otherwise.
struct CheckResult {
  std::string name;
  bool pass = true;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  Fraction margin;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool overall() const;
  void add(CheckResult r) { checks.push_back(std::move(r)); }
  void merge(const VerificationReport& other);
};

/// Shares plus residue are pairwise disjoint and their union is the cake.
CheckResult check_partition(const PieceSet& cake, const Allocation& alloc);

/// Every agent in `scope` (all agents when empty) values its own share at
/// least as much as every other scoped share, up to `tolerance`.
CheckResult check_envy_free(const std::vector<AgentSpec>& agents, const Allocation& alloc,
                            const Fraction& tolerance = Fraction(0), const std::vector<std::size_t>& scope = {});

/// Every scoped agent gets at least 1/|scope| of its value of the cake.
CheckResult check_proportional(const std::vector<AgentSpec>& agents, const Allocation& alloc, const PieceSet& cake,
                               const std::vector<std::size_t>& scope = {});

/// i values its share at least its view of j's share plus T, and vice versa.
CheckResult check_advantage(const std::vector<AgentSpec>& agents, const Allocation& alloc,
                            std::pair<std::size_t, std::size_t> pair, const PieceSet& residue);

/// Each agent values bundle r within epsilon * v(whole) of ratios[r] * v(whole),
/// where whole is the union of the bundles; the starred agent must be exact.
CheckResult check_near_exact(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                             const std::vector<Fraction>& ratios, const Fraction& epsilon,
                             std::optional<std::size_t> starred = std::nullopt);
CheckResult check_near_exact(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                             std::size_t parts, const Fraction& epsilon,
                             std::optional<std::size_t> starred = std::nullopt);

/// Largest relative deviation |v(b_r) - ratios[r] v(whole)| / v(whole) over
/// agents with v(whole) > 0 and bundles r.
Fraction max_relative_deviation(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                                const std::vector<Fraction>& ratios);

std::vector<Fraction> equal_ratios(std::size_t parts);

}  // namespace efcake
