#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzoracle {

enum class ErrorCode {
  PolicyTooSmall,
  DuplicateReferenceState,
  InvalidDelta,
  StateKindMismatch,
  ActionKindMismatch,
  InvalidMembership,
  EmptyLog,
  SeriesTooShort,
  InvalidWindow,
  InvalidEnvSpec,
  InvalidState,
  InvalidAction,
  AlgorithmEnvMismatch,
  InvalidAgentConfig,
  NumericalDivergence,
  UnknownBug,
  PolicyTooLarge,
  SamplingExhausted,
  InvalidOracleConfig,
  EmptyMatrix,
  EmptyCorpus,
  InvalidThresholds,
  SchemaViolation,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-status mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fuzzoracle
