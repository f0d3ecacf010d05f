#pragma once

#include <vector>

#include "efcake/piece_set.hpp"

namespace efcake {

/// Shares indexed like the agent list the protocol ran on, plus whatever cake
/// is still unassigned. Agents that receive nothing hold an empty share.
struct Allocation {
  std::vector<PieceSet> shares;
  PieceSet residue;
};

}  // namespace efcake
