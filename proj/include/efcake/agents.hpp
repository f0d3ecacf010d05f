#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "efcake/fraction.hpp"
#include "efcake/ledger.hpp"
#include "efcake/piece_set.hpp"
#include "efcake/rng.hpp"
#include "efcake/valuation.hpp"

namespace efcake {

enum class Declaration { eq, neq };

const char* to_string(Declaration d);

struct DeclarationPolicy {
  enum class Kind { honest, scripted, random };

  Kind kind = Kind::honest;
  std::vector<Declaration> script;  // scripted
  Fraction probability_eq;          // random

  static DeclarationPolicy honest() { return {}; }
  static DeclarationPolicy scripted(std::vector<Declaration> script) { return {Kind::scripted, std::move(script), {}}; }
  static DeclarationPolicy random(Fraction p_eq) { return {Kind::random, {}, std::move(p_eq)}; }
};

enum class Side { a, b };

/// A player: a name, a private valuation, and how it behaves where protocols
/// only advise. An agent that does not follow advice picks the lowest-index
/// option whenever it is asked to choose a piece.
struct AgentSpec {
  std::string name;
  ValuationDensity valuation = ValuationDensity::uniform();
  bool follows_advice = true;
  DeclarationPolicy policy;
  Side side = Side::a;
};

/// Per-run mutable state for declarations (script position and the random
/// stream). Lives with the protocol run, never inside AgentSpec.
class DeclarationCursor {
 public:
  explicit DeclarationCursor(std::uint64_t seed = 0) : rng_(seed) {}
  std::size_t& position(std::size_t agent_index);
  Rng& rng() { return rng_; }

 private:
  std::vector<std::size_t> positions_;
  Rng rng_;
};

/// Value query. Logs EVAL; never charges the counter.
Fraction eval(const AgentSpec& agent, const PieceSet& p, Ledger& ledger);

/// Cut query: leftmost point x with agent's value of p ∩ [0, x) equal to
/// target. Charges one cut.
Fraction cut(const AgentSpec& agent, const PieceSet& p, const Fraction& target, Ledger& ledger);

/// EQ / NEQ declaration over a non-empty list of pieces. `forced_eq` models a
/// player the protocol obliges to write EQ. Throws ConfigError when a scripted
/// policy runs out.
Declaration declare(const AgentSpec& agent, std::size_t agent_index, const std::vector<PieceSet>& pieces,
                    DeclarationCursor& cursor, bool forced_eq = false);

/// Lexicographically least (p, q), p < q, with pieces the agent values
/// differently; nullopt when the agent values them all equally.
std::optional<std::pair<std::size_t, std::size_t>> unequal_witness(const AgentSpec& agent,
                                                                   const std::vector<PieceSet>& pieces);

std::vector<ValuationDensity> valuations_of(const std::vector<AgentSpec>& agents);

// Profile files -------------------------------------------------------------

/// Parses the line-oriented agent profile format:
///   agent <name> [advice=yes|no] [policy=honest|random:<p/q>|script:<EQ,NEQ,...>] [side=a|b]
///   seg <lo> <hi> <density>
/// Errors carry the 1-based line number.
std::vector<AgentSpec> parse_profile(std::istream& in);
std::vector<AgentSpec> load_profile(const std::string& path);
std::string format_profile(const std::vector<AgentSpec>& agents);

/// Random piecewise-constant density with 1..max_segments segments on a grid
/// of 1/grid, integer weights in [0, 9] (at least one positive).
ValuationDensity random_valuation(Rng& rng, std::size_t max_segments = 8, std::uint64_t grid = 24);

/// `count` honest agents named a1, a2, ... with random valuations.
std::vector<AgentSpec> random_profile(std::uint64_t seed, std::size_t count, std::size_t max_segments = 8);

}  // namespace efcake
