#include "efcake/verification.hpp"

#include <numeric>

#include "efcake/cake.hpp"

namespace efcake {

namespace {

std::vector<std::size_t> resolve_scope(const std::vector<std::size_t>& scope, std::size_t n) {
  if (!scope.empty()) return scope;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return all;
}

}  // namespace

bool VerificationReport::overall() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

void VerificationReport::merge(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

CheckResult check_partition(const PieceSet& cake, const Allocation& alloc) {
  CheckResult r{"partition", true, std::nullopt, Fraction(0)};
  std::vector<PieceSet> pieces = alloc.shares;
  pieces.push_back(alloc.residue);
  for (std::size_t a = 0; a < pieces.size(); ++a) {
    for (std::size_t b = a + 1; b < pieces.size(); ++b) {
      const Fraction overlap = pieces[a].intersect(pieces[b]).length();
      if (overlap.sign() > 0 && (r.pass || -overlap < r.margin)) {
        r.pass = false;
        r.margin = -overlap;
        r.worst_pair = std::make_pair(a, b);
      }
    }
  }
  const PieceSet covered = unite_all(pieces);
  if (covered != cake) {
    const Fraction mismatch = cake.subtract(covered).length() + covered.subtract(cake).length();
    if (r.pass || -mismatch < r.margin) r.margin = -mismatch;
    r.pass = false;
  }
  return r;
}

CheckResult check_envy_free(const std::vector<AgentSpec>& agents, const Allocation& alloc, const Fraction& tolerance,
                            const std::vector<std::size_t>& scope) {
  CheckResult r{"envy_free", true, std::nullopt, Fraction(0)};
  bool first = true;
  for (std::size_t i : resolve_scope(scope, agents.size())) {
    const Fraction own = measure(agents[i].valuation, alloc.shares[i]);
    for (std::size_t k : resolve_scope(scope, agents.size())) {
      if (k == i) continue;
      const Fraction slack = own - measure(agents[i].valuation, alloc.shares[k]);
      if (first || slack < r.margin) {
        r.margin = slack;
        r.worst_pair = std::make_pair(i, k);
        first = false;
      }
    }
  }
  r.pass = r.margin >= -tolerance;
  return r;
}

CheckResult check_proportional(const std::vector<AgentSpec>& agents, const Allocation& alloc, const PieceSet& cake,
                               const std::vector<std::size_t>& scope) {
  CheckResult r{"proportional", true, std::nullopt, Fraction(0)};
  const auto members = resolve_scope(scope, agents.size());
  const Fraction n(static_cast<std::int64_t>(members.size()));
  bool first = true;
  for (std::size_t i : members) {
    const Fraction slack = measure(agents[i].valuation, alloc.shares[i]) - measure(agents[i].valuation, cake) / n;
    if (first || slack < r.margin) {
      r.margin = slack;
      r.worst_pair = std::make_pair(i, i);
      first = false;
    }
  }
  r.pass = r.margin.sign() >= 0;
  return r;
}

CheckResult check_advantage(const std::vector<AgentSpec>& agents, const Allocation& alloc,
                            std::pair<std::size_t, std::size_t> pair, const PieceSet& residue) {
  const auto [i, j] = pair;
  const auto& vi = agents[i].valuation;
  const auto& vj = agents[j].valuation;
  const Fraction slack_i = measure(vi, alloc.shares[i]) - measure(vi, alloc.shares[j]) - measure(vi, residue);
  const Fraction slack_j = measure(vj, alloc.shares[j]) - measure(vj, alloc.shares[i]) - measure(vj, residue);
  CheckResult r{"advantage", true, pair, min(slack_i, slack_j)};
  if (slack_j < slack_i) r.worst_pair = std::make_pair(j, i);
  r.pass = r.margin.sign() >= 0;
  return r;
}

CheckResult check_near_exact(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                             const std::vector<Fraction>& ratios, const Fraction& epsilon,
                             std::optional<std::size_t> starred) {
  CheckResult r{"near_exact", true, std::nullopt, Fraction(0)};
  const PieceSet whole = unite_all(bundles);
  bool first = true;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto& v = agents[k].valuation;
    const Fraction total = measure(v, whole);
    const Fraction allowed = (starred && *starred == k) ? Fraction(0) : epsilon * total;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      const Fraction slack = allowed - abs(measure(v, bundles[b]) - ratios[b] * total);
      if (first || slack < r.margin) {
        r.margin = slack;
        r.worst_pair = std::make_pair(k, b);
        first = false;
      }
    }
  }
  r.pass = r.margin.sign() >= 0;
  return r;
}

CheckResult check_near_exact(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                             std::size_t parts, const Fraction& epsilon, std::optional<std::size_t> starred) {
  return check_near_exact(agents, bundles, equal_ratios(parts), epsilon, starred);
}

Fraction max_relative_deviation(const std::vector<AgentSpec>& agents, const std::vector<PieceSet>& bundles,
                                const std::vector<Fraction>& ratios) {
  const PieceSet whole = unite_all(bundles);
  Fraction worst;
  for (const auto& a : agents) {
    const Fraction total = measure(a.valuation, whole);
    if (total.is_zero()) continue;
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      worst = max(worst, abs(measure(a.valuation, bundles[b]) - ratios[b] * total) / total);
    }
  }
  return worst;
}

std::vector<Fraction> equal_ratios(std::size_t parts) {
  return std::vector<Fraction>(parts, Fraction(1, static_cast<std::int64_t>(parts)));
}

}  // namespace efcake
