#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "efcake/fraction.hpp"
#include "efcake/protocols.hpp"

namespace efcake::cli {

inline constexpr int kOk = 0;
inline constexpr int kParseError = 2;
inline constexpr int kVerificationFailed = 3;
inline constexpr int kBudgetExhausted = 4;

struct RunConfig {
  std::string protocol;
  std::string agents_path;
  Fraction epsilon{1, 100};
  std::optional<std::string> budget;
  EfbtMode mode = EfbtMode::real;
  std::uint64_t seed = 0;
  std::optional<std::string> out_path;
};

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(std::size_t n, std::uint64_t trials, std::uint64_t seed, std::ostream& out, std::ostream& err);
int cmd_recurrence(const std::string& protocol, std::size_t n, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& transcript_path, const std::string& agents_path, std::ostream& out,
               std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace efcake::cli
