#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace efcake {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested target lies outside the admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `position` is a 1-based column or line, depending on
/// the parser that raised it.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A cut was charged against an ordinal budget of zero.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// The counter needed to convert an omega term, but the running phase never
/// declared its finite bound.
class ObserverUnready : public Error {
 public:
  using Error::Error;
};

/// A phase made more cuts than it declared up front.
class PhaseBoundExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidWitness : public Error {
 public:
  using Error::Error;
};

/// A subprotocol could not meet (or failed to verify) its contract.
class SubprotocolFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace efcake
