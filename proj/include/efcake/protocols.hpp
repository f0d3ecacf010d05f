#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efcake/agents.hpp"
#include "efcake/allocation.hpp"
#include "efcake/ledger.hpp"
#include "efcake/subprotocols.hpp"
#include "efcake/verification.hpp"

namespace efcake {

/// Undirected simple graph on at most 64 vertices recording which pairs hold
/// a mutual advantage, and the stage that created each edge.
class AdvantageGraph {
 public:
  struct Edge {
    std::size_t a;
    std::size_t b;
    int stage;
  };

  explicit AdvantageGraph(std::size_t n = 0);

  std::size_t size() const { return adjacency_.size(); }
  bool has_edge(std::size_t a, std::size_t b) const;
  /// Throws RangeError on self-loops, repeated edges, or unknown vertices.
  void add_edge(std::size_t a, std::size_t b, int stage);
  std::size_t degree(std::size_t v) const;
  std::size_t edge_count() const { return edges_.size(); }
  /// Lowest-index vertex adjacent to every other vertex.
  std::optional<std::size_t> full_vertex() const;
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::vector<std::uint64_t> adjacency_;
  std::vector<Edge> edges_;
};

enum class StageCase { degree_exit, case1, case2 };
const char* to_string(StageCase c);

/// Decision of one EFBT round given the declarations: Case 1 when every
/// (EQ, NEQ) pair is already an edge, otherwise the lexicographically least
/// missing (EQ, NEQ) pair.
struct GraphStep {
  StageCase outcome;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
};
GraphStep efbt_graph_step(const AdvantageGraph& graph, const std::vector<Declaration>& declarations);

struct StageRecord {
  int stage_id = 0;
  std::vector<Declaration> declarations;
  StageCase taken = StageCase::case1;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::optional<std::size_t> recipient;
  std::uint64_t cuts_used = 0;
  std::vector<Fraction> residue_measures;
  std::optional<AdvPath> adv_path;
  VerificationReport adv_report;
};

/// One node of the EFRW / Pikhurto recursion, for inspection.
struct RecursionNode {
  int depth = 0;
  std::vector<std::string> a_side;
  std::size_t b_count = 0;
  std::string outcome;
  std::vector<std::size_t> group_sizes;
};

enum class EfbtMode { real, scripted };

/// Everything a protocol run produced. `agents` lists the players in share
/// order; `scope` are the indices the envy-freeness guarantee covers.
struct ProtocolRun {
  std::string protocol;
  std::vector<AgentSpec> agents;
  std::vector<std::size_t> scope;
  PieceSet cake;
  std::optional<Fraction> epsilon;
  EfbtMode mode = EfbtMode::real;
  Allocation allocation;
  VerificationReport report;
  AdvantageGraph graph;
  std::vector<StageRecord> stages;
  std::vector<RecursionNode> recursion;
};

ProtocolRun cut_and_choose(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger);
ProtocolRun selfridge_conway(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger);
ProtocolRun even_paz(const std::vector<AgentSpec>& agents, const PieceSet& cake, Ledger& ledger);
ProtocolRun efbt(const std::vector<AgentSpec>& agents, const PieceSet& cake, EfbtMode mode, Ledger& ledger,
                 std::uint64_t seed);
ProtocolRun efrw(const std::vector<AgentSpec>& a_agents, const std::vector<AgentSpec>& b_agents, const PieceSet& cake,
                 const Fraction& epsilon, Ledger& ledger);
ProtocolRun pikhurto(const std::vector<AgentSpec>& a_agents, const std::vector<AgentSpec>& b_agents,
                     const PieceSet& cake, const Fraction& epsilon, Ledger& ledger);

/// The checks each protocol's result is held to.
VerificationReport verify_allocation(const std::string& protocol, const std::vector<AgentSpec>& agents,
                                     const std::vector<std::size_t>& scope, const PieceSet& cake,
                                     const Allocation& alloc, const std::optional<Fraction>& epsilon);

const std::vector<std::string>& protocol_names();
bool is_protocol(const std::string& name);

/// Budget the protocol is started with: the published bound for the A-side
/// size `n`.
OrdinalBudget default_budget(const std::string& protocol, std::size_t n);

/// Runs `protocol` on a profile, splitting A- and B-side agents by their side
/// attribute for efrw and pikhurto.
ProtocolRun run_protocol(const std::string& protocol, const std::vector<AgentSpec>& agents, const Fraction& epsilon,
                         EfbtMode mode, std::uint64_t seed, Ledger& ledger);

void write_transcript(std::ostream& out, const ProtocolRun& run, const Ledger& ledger);

}  // namespace efcake
