#include "efcake/ledger.hpp"

#include <algorithm>

#include "efcake/errors.hpp"

namespace efcake {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::eval: return "EVAL";
    case EventKind::cut: return "CUT";
    case EventKind::declare: return "DECLARE";
    case EventKind::assign: return "ASSIGN";
    case EventKind::counter: return "COUNTER";
    case EventKind::phase: return "PHASE";
  }
  return "?";
}

Ledger::Ledger(OrdinalBudget initial) : initial_(initial), budget_(initial) {}

void Ledger::open_phase(const std::string& label, std::uint64_t bound) {
  phases_.push_back({label, bound, 0});
  record(EventKind::phase, "-", "open " + label + " bound=" + std::to_string(bound));
}

std::uint64_t Ledger::close_phase() {
  if (phases_.empty()) throw Error("close_phase without an open phase");
  const Phase p = phases_.back();
  phases_.pop_back();
  record(EventKind::phase, "-", "close " + p.label + " used=" + std::to_string(p.used));
  return p.used;
}

void Ledger::charge(const std::string& agent, const std::string& details) {
  for (const auto& p : phases_) {
    if (p.used >= p.bound) {
      throw PhaseBoundExceeded("phase " + p.label + " exceeded its declared bound of " + std::to_string(p.bound) +
                               " cuts");
    }
  }
  std::optional<std::uint64_t> remaining;
  if (!phases_.empty()) remaining = phases_.front().bound - phases_.front().used;
  const OrdinalBudget next = charge_cut(budget_, remaining);
  if (next.omega_coeff < budget_.omega_coeff) ++conversions_;
  budget_ = next;
  ++cuts_;
  for (auto& p : phases_) ++p.used;
  record(EventKind::cut, agent, details);
  record(EventKind::counter, "-", budget_.to_string());
}

void Ledger::record(EventKind kind, const std::string& agent, const std::string& details) {
  events_.push_back({kind, agent, details, stage_});
}

std::uint64_t Ledger::count(EventKind kind) const {
  return static_cast<std::uint64_t>(
      std::count_if(events_.begin(), events_.end(), [kind](const QueryEvent& e) { return e.kind == kind; }));
}

PhaseScope::PhaseScope(Ledger& ledger, const std::string& label, std::uint64_t bound) : ledger_(ledger) {
  ledger_.open_phase(label, bound);
}

PhaseScope::~PhaseScope() {
  if (open_) ledger_.close_phase();
}

std::uint64_t PhaseScope::close() {
  open_ = false;
  return ledger_.close_phase();
}

}  // namespace efcake
