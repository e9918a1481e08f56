#pragma once

#include <stdexcept>
#include <string>

namespace bip {

// Raised when a diagram fails the unique-configuration conditions but an
// operation needs the unique expansion.
struct NotEncodableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Backtracking search exceeded its node budget; `found` carries the number of
// complete configurations discovered before the cutoff.
struct LimitExceededError : std::runtime_error {
  long long found = 0;
  LimitExceededError(const std::string& msg, long long found_so_far)
      : std::runtime_error(msg), found(found_so_far) {}
};

// Extensional enumeration over port instances refused: universe too big.
struct UniverseTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownPatternError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingCardinalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Engine construction / execution failures (invalid behavior, unknown
// scenario events, ...).
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An instance kept taking internal transitions past the per-cycle bound.
struct InternalLivelockError : EngineError {
  using EngineError::EngineError;
};

}  // namespace bip
