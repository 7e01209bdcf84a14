#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlnet {

enum class ErrorCode {
  DuplicateLink,
  SelfLoop,
  LayerViolation,
  Disconnected,
  NonpositiveCapacity,
  MissingPosition,
  UnknownNode,
  InvalidParams,
  ConnectivityRetriesExhausted,
  TooManyInterfaces,
  MergeCreatedDuplicateLink,
  DisconnectedPair,
  OutOfBounds,
  InvalidN,
  NotEnoughNodes,
  InvalidArgs,
  NoWirelessPairs,
  InsufficientRecords,
  InvalidConfig,
  NoConvergence,
  ConfigError,
  IoError,
  ParseError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// and tests distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mlnet
