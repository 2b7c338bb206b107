#pragma once

#include <cstddef>
#include <vector>

#include "fuzzoracle/space.hpp"

namespace fuzzoracle {

struct TraceStep {
  StatePoint state;
  ActionPoint action;
  double reward = 0.0;  // diagnostics only; compliance never reads it
};

struct EpochTrace {
  std::size_t epochIndex = 1;  // 1-based
  std::vector<TraceStep> steps;
  bool aborted = false;  // training hit NumericalDivergence mid-epoch
};

struct RunLog {
  std::size_t policyId = 0;
  std::vector<EpochTrace> epochs;

  [[nodiscard]] std::size_t aborted_epochs() const;
};

/// Per-epoch policy-compliance values, each in [0, 1].
struct ComplianceSeries {
  std::vector<double> values;

  friend bool operator==(const ComplianceSeries&, const ComplianceSeries&) = default;
};

}  // namespace fuzzoracle
