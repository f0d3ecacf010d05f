#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "efcake/ordinal.hpp"

namespace efcake {

enum class EventKind { eval, cut, declare, assign, counter, phase };

const char* to_string(EventKind kind);

/// One transcript record. `details` holds the already-serialized arguments
/// and result.
struct QueryEvent {
  EventKind kind;
  std::string agent;
  std::string details;
  int stage_id = 0;
};

/// The mutable state of one protocol execution: the ordinal cut counter, the
/// stack of declared phases, and the append-only transcript.
///
/// Phases nest. Every cut counts against every open phase, and any phase that
/// goes over its declared bound raises PhaseBoundExceeded. When the counter has
/// to trade an omega for a natural number, the outermost open phase's
/// remaining allowance is what the observer commits to.
class Ledger {
 public:
  explicit Ledger(OrdinalBudget initial = {});

  const OrdinalBudget& initial_budget() const { return initial_; }
  const OrdinalBudget& budget() const { return budget_; }
  std::uint64_t cuts() const { return cuts_; }
  /// Number of omega terms traded so far.
  std::uint64_t omega_conversions() const { return conversions_; }

  void set_stage(int stage) { stage_ = stage; }
  int stage() const { return stage_; }

  void open_phase(const std::string& label, std::uint64_t bound);
  /// Closes the innermost phase and returns the cuts it used.
  std::uint64_t close_phase();
  std::size_t open_phases() const { return phases_.size(); }

  /// Charges one cut made by `agent`, logging CUT and COUNTER events.
  void charge(const std::string& agent, const std::string& details);

  void record(EventKind kind, const std::string& agent, const std::string& details);

  const std::vector<QueryEvent>& events() const { return events_; }
  std::uint64_t count(EventKind kind) const;

 private:
  struct Phase {
    std::string label;
    std::uint64_t bound;
    std::uint64_t used;
  };

  OrdinalBudget initial_;
  OrdinalBudget budget_;
  std::uint64_t cuts_ = 0;
  std::uint64_t conversions_ = 0;
  int stage_ = 0;
  std::vector<Phase> phases_;
  std::vector<QueryEvent> events_;
};

/// Closes the phase it opened on scope exit, so error paths leave the stack
/// balanced.
class PhaseScope {
 public:
  PhaseScope(Ledger& ledger, const std::string& label, std::uint64_t bound);
  ~PhaseScope();
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

  /// Closes early and returns the cuts used inside the phase.
  std::uint64_t close();

 private:
  Ledger& ledger_;
  bool open_ = true;
};

}  // namespace efcake
