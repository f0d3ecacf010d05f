#include "efcake/ordinal.hpp"

#include <cctype>
#include <limits>

#include "efcake/errors.hpp"

namespace efcake {

namespace {

std::uint64_t parse_digits(std::string_view text, std::size_t& pos) {
  const std::size_t start = pos;
  std::uint64_t value = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    const auto digit = static_cast<std::uint64_t>(text[pos] - '0');
    if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
      throw ParseError("ordinal coefficient overflows", start + 1);
    }
    value = value * 10 + digit;
    ++pos;
  }
  if (pos == start) throw ParseError("expected decimal digits", start + 1);
  return value;
}

}  // namespace

OrdinalBudget OrdinalBudget::parse(std::string_view text) {
  std::size_t pos = 0;
  const std::uint64_t first = parse_digits(text, pos);
  if (pos == text.size()) return {0, first};
  if (text[pos] != 'w') throw ParseError("expected 'w' or end of input", pos + 1);
  ++pos;
  if (pos == text.size()) return {first, 0};
  if (text[pos] == 'w' || text[pos] == '^') throw ParseError("only ordinals below w^2 are supported", pos + 1);
  if (text[pos] != '+') throw ParseError("expected '+' after 'w'", pos + 1);
  ++pos;
  const std::uint64_t second = parse_digits(text, pos);
  if (pos != text.size()) throw ParseError("trailing characters", pos + 1);
  return {first, second};
}

std::string OrdinalBudget::to_string() const {
  if (omega_coeff == 0) return std::to_string(finite_part);
  return std::to_string(omega_coeff) + "w+" + std::to_string(finite_part);
}

OrdinalBudget charge_cut(const OrdinalBudget& budget, std::optional<std::uint64_t> phase_bound) {
  if (budget.is_zero()) throw BudgetExhausted("cut charged against an exhausted budget");
  if (budget.finite_part > 0) return {budget.omega_coeff, budget.finite_part - 1};
  if (!phase_bound) throw ObserverUnready("omega must be converted but no phase bound was declared");
  if (*phase_bound == 0) throw ObserverUnready("phase bound of zero cuts cannot pay for a cut");
  return {budget.omega_coeff - 1, *phase_bound - 1};
}

}  // namespace efcake
