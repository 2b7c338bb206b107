#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fuzzoracle/trace.hpp"

namespace fuzzoracle::io {

// Line-delimited trace: one header object, then one object per step.
//
//   {"format":"fuzzoracle-trace","version":1,"env_fingerprint":"...",
//    "policy_id":0,"epochs":3,"state_kind":"grid","action_kind":"discrete",
//    "aborted_epochs":[]}
//   {"epoch":1,"step":1,"state":[0,0],"action":[2],"reward":0.0}
//
// Epochs and steps are 1-based and must be contiguous.

struct TraceHeader {
  std::string envFingerprint;
  std::size_t policyId = 0;
  std::size_t epochs = 0;
  bool gridStates = true;
  bool discreteActions = true;
  std::vector<std::size_t> abortedEpochs;
};

struct TraceDocument {
  TraceHeader header;
  RunLog log;
};

void write_trace(std::ostream& out, const RunLog& log, const std::string& envFingerprint);
std::string write_trace(const RunLog& log, const std::string& envFingerprint);

/// Throws Error(SchemaViolation) naming the offending line, or
/// Error(EmptyLog) when the trace holds no steps.
TraceDocument read_trace(std::istream& in, const std::string& source = "trace");
TraceDocument read_trace_file(const std::string& path);

}  // namespace fuzzoracle::io
