#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PolicyTooSmall: return "PolicyTooSmall";
    case ErrorCode::DuplicateReferenceState: return "DuplicateReferenceState";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::StateKindMismatch: return "StateKindMismatch";
    case ErrorCode::ActionKindMismatch: return "ActionKindMismatch";
    case ErrorCode::InvalidMembership: return "InvalidMembership";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidEnvSpec: return "InvalidEnvSpec";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::AlgorithmEnvMismatch: return "AlgorithmEnvMismatch";
    case ErrorCode::InvalidAgentConfig: return "InvalidAgentConfig";
    case ErrorCode::NumericalDivergence: return "NumericalDivergence";
    case ErrorCode::UnknownBug: return "UnknownBug";
    case ErrorCode::PolicyTooLarge: return "PolicyTooLarge";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::InvalidOracleConfig: return "InvalidOracleConfig";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace fuzzoracle
