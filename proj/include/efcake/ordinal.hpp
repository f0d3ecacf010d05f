#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace efcake {

/// An ordinal below omega^2, written c*omega + m.
///
/// Serves as the cut counter: every cut strictly decreases it, and when the
/// finite part is zero an omega is traded for the finite number of cuts the
/// observer commits to for the current phase.
struct OrdinalBudget {
  std::uint64_t omega_coeff = 0;
  std::uint64_t finite_part = 0;

  /// Accepts "Aw+B", "Aw" or "B" with decimal digits. Throws ParseError with a
  /// 1-based character position.
  static OrdinalBudget parse(std::string_view text);
  /// "Aw+B" when A > 0 (including "+0"), otherwise "B".
  std::string to_string() const;

  bool is_zero() const { return omega_coeff == 0 && finite_part == 0; }

  friend bool operator==(const OrdinalBudget&, const OrdinalBudget&) = default;
  friend std::strong_ordering operator<=>(const OrdinalBudget& a, const OrdinalBudget& b) {
    if (auto c = a.omega_coeff <=> b.omega_coeff; c != 0) return c;
    return a.finite_part <=> b.finite_part;
  }
};

/// Lexicographic order on (omega_coeff, finite_part).
inline bool leq(const OrdinalBudget& a, const OrdinalBudget& b) { return a <= b; }

/// One cut. With finite part m > 0 the result is (c, m-1). With m = 0 and
/// c > 0 the observer must supply phase_bound k >= 1, the number of cuts
/// (this one included) sufficient to finish the phase; the result is
/// (c-1, k-1). Throws BudgetExhausted on zero and ObserverUnready when the
/// bound is missing.
OrdinalBudget charge_cut(const OrdinalBudget& budget, std::optional<std::uint64_t> phase_bound);

}  // namespace efcake
