#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efcake/agents.hpp"
#include "efcake/allocation.hpp"
#include "efcake/fraction.hpp"
#include "efcake/ledger.hpp"
#include "efcake/piece_set.hpp"
#include "efcake/verification.hpp"

namespace efcake {

/// Bundles from a near-exact split. `achieved_deviation` is the largest
/// relative deviation any player sees from its target share.
struct NearExactResult {
  std::vector<PieceSet> bundles;
  Fraction achieved_deviation;
  std::uint64_t cuts_used = 0;
  std::uint64_t declared_bound = 0;
};

/// A piece on which the A-players split into a high group (all value it at
/// least alpha) and a low group (all at most beta), alpha > beta. Group
/// members are indices into the A-player list.
struct ControversyWitness {
  PieceSet piece;
  std::vector<std::size_t> group_hi;
  std::vector<std::size_t> group_lo;
  Fraction alpha;
  Fraction beta;
  std::uint64_t cuts_used = 0;
};

enum class AdvPath { primary, fallback };
const char* to_string(AdvPath path);

/// Outcome of the mutual-advantage step. Shares are indexed like the player
/// list; `report` holds the postcondition checks that were run on it.
struct AdvResult {
  Allocation allocation;
  PieceSet residue;
  std::pair<std::size_t, std::size_t> pair;
  AdvPath path = AdvPath::fallback;
  std::uint64_t cuts_used = 0;
  VerificationReport report;
};

/// Cut bounds declared to the ledger before each subprotocol's first cut.
std::uint64_t near_exact_cut_bound(const std::vector<AgentSpec>& players, const PieceSet& p, std::size_t parts);
std::uint64_t adv_cut_bound(const std::vector<AgentSpec>& players, const PieceSet& d);
std::uint64_t shrink_cut_bound(std::size_t players, const Fraction& max_value, const Fraction& delta);

/// Charges `count` cuts made by the referee.
void charge_referee(Ledger& ledger, std::size_t count, const std::string& what);

/// Splits p into `parts` bundles. Player 0 values each at exactly 1/parts of
/// its value of p; every other player is within epsilon of 1/parts (relative
/// to its own value of p).
NearExactResult near_exact_star(const std::vector<AgentSpec>& players, const PieceSet& p, std::size_t parts,
                                const Fraction& epsilon, Ledger& ledger);

/// Like near_exact_star with target shares `ratios` (positive, summing to 1).
NearExactResult unfair_near_exact(const std::vector<AgentSpec>& players, const PieceSet& p,
                                  const std::vector<Fraction>& ratios, const Fraction& epsilon, Ledger& ledger);
NearExactResult unfair_near_exact(const std::vector<AgentSpec>& players, const PieceSet& p, const Fraction& f1,
                                  const Fraction& f2, const Fraction& epsilon, Ledger& ledger);

/// Shrinks the controversial piece until every player (A and B side) values
/// it at most delta, keeping a valid witness among the A-players.
ControversyWitness controversial_shrink(const std::vector<AgentSpec>& a_players,
                                        const std::vector<AgentSpec>& b_players, const ControversyWitness& witness,
                                        const Fraction& delta, Ledger& ledger);

/// Recomputes the two groups from the A-players' values of `piece`, split at
/// the largest gap of the sorted values. Throws InvalidWitness when all values
/// coincide.
ControversyWitness witness_from_values(const PieceSet& piece, const std::vector<Fraction>& values);

/// Validates the witness invariants against the players' actual values.
void validate_witness(const std::vector<AgentSpec>& a_players, const ControversyWitness& witness);

/// Divides P ∪ Q ∪ R among all players envy-freely with residue T such that
/// i and j each hold an advantage over the other. Requires v_i(P) = v_i(Q)
/// and v_j(P) != v_j(Q).
AdvResult adv(const std::vector<AgentSpec>& players, std::pair<std::size_t, std::size_t> pair, const PieceSet& P,
              const PieceSet& Q, const PieceSet& R, Ledger& ledger);

}  // namespace efcake
