#pragma once

#include <stdexcept>
#include <string>

namespace mmaas {

// Recoverable input/contract failures. CLI maps these to exit code 1.
enum class Err {
  DisconnectedControlGraph,
  DuplicateId,
  DuplicateMembership,
  NonPositiveLatency,
  UnknownAp,
  UnknownEntity,
  Unreachable,
  NegativeSpeed,
  NotIntraDomain,
  FlowNotActive,
  NoAttachment,
  AllCandidatesFiltered,
  InstanceRefusedStatic,
  ParseError,
  ValidationError,
  ScenarioMismatch,
  IoError,
};

const char* err_name(Err e);

class SimError : public std::runtime_error {
 public:
  SimError(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

  Err code() const { return code_; }

 private:
  Err code_;
};

// Engine self-check failures (protocol order, scheduling in the past).
// These indicate a simulator bug, not bad input. CLI maps them to exit code 2.
class EngineAssertion : public std::logic_error {
 public:
  explicit EngineAssertion(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace mmaas
