#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "efcake/fraction.hpp"
#include "efcake/ordinal.hpp"

namespace efcake {

struct EfbtBound {
  OrdinalBudget budget;
  std::uint64_t pieces = 0;  // L = lcm(2, ..., n)
};

/// ⌈(n²-2n+2)/2⌉ω + (L-1) with L = lcm(2..n).
EfbtBound efbt_worst_bound(std::size_t n);

/// Edge count ⌈n(n-2)/2 + 1⌉ that forces a vertex of degree n-1.
std::uint64_t lemma2_threshold(std::size_t n);

struct Lemma2Check {
  std::size_t n = 0;
  std::uint64_t threshold = 0;
  std::uint64_t graphs = 0;
  /// Every graph with at least `threshold` edges has a degree-(n-1) vertex.
  bool threshold_forces = true;
  /// Edge mask (pairs in lexicographic order) of a graph with threshold-1
  /// edges and no degree-(n-1) vertex, when one exists.
  std::optional<std::uint64_t> witness_below;
  /// Smallest edge count that forces a degree-(n-1) vertex. Equals
  /// `threshold` for even n and can be smaller for odd n.
  std::uint64_t tight_threshold = 0;
};

/// Enumerates every graph on n ≤ 7 vertices. Throws RangeError beyond that.
Lemma2Check lemma2_brute_force(std::size_t n);
/// True when every graph at or above the threshold has a degree-(n-1) vertex.
bool brute_force_check(std::size_t n);

struct DynamicsStats {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  Fraction mean;
  Fraction variance;  // unbiased sample variance
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t degree_exits = 0;
  std::uint64_t case1_exits = 0;
  std::uint64_t max_stages = 0;

  double std_error() const;
};

/// Monte-Carlo run of the scripted EFBT graph process: A1 always declares EQ,
/// everyone else EQ with probability 1/2. Trial t draws from
/// Rng(derive_seed(seed, t)), so results do not depend on `threads`.
/// threads = 0 picks the hardware concurrency capped by EFCAKE_THREADS.
DynamicsStats efbt_dynamics(std::size_t n, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Thread count used when the caller does not choose one.
unsigned simulation_threads();

/// Exact expected stage count of the same process, by dynamic programming
/// over the reachable edge sets (each stage adds an edge, so the chain is
/// acyclic). Limited to n ≤ 8.
Fraction exact_expected_stages(std::size_t n);

/// 1 + Σ_{L=2..n} 1 / (1 - 0.5^(L+offset)); the published closed forms use
/// offsets 2 and 1.
double closed_form_expected_stages(std::size_t n, int offset);
/// (ln(2^(n+1)) - 1) / ln 2.
double asymptotic_expected_stages(std::size_t n);

/// α + β for ordinals below ω².
OrdinalBudget ordinal_add(const OrdinalBudget& a, const OrdinalBudget& b);

/// T(n; m) = 2ω + max_i T(i; n+m-i) + T(n-i; m+i), T(1; m) = 0, T(2; m) = ω.
OrdinalBudget efrw_recurrence(std::size_t n, std::size_t m);
/// T(n; m) = 2ω + max over partitions n = i_1 + ... + i_k (k ≥ 2) of
/// Σ T(i_g; n+m-i_g), same base cases. n ≤ 15.
OrdinalBudget pikhurto_recurrence(std::size_t n, std::size_t m);

/// T(n; m) ≤ (2n-3)ω for 2 ≤ n ≤ n_max and 0 ≤ m ≤ m_max, T(1; m) = 0, and
/// T non-decreasing in n.
bool efrw_bound_check(std::size_t n_max, std::size_t m_max = 50);
bool pikhurto_bound_check(std::size_t n_max, std::size_t m_max = 15);

/// Mean number of ω-phases (near-exact plus controversy phases) when every
/// controversy splits the A-side uniformly at random: into two groups of
/// uniform size for EFRW, into the blocks of a uniform level assignment for
/// Pikhurto. Assumes step 3 never ends a call early.
double average_omega_phases(const std::string& protocol, std::size_t n, std::uint64_t trials, std::uint64_t seed);

}  // namespace efcake
