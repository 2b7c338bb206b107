#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fuzzoracle/agents.hpp"
#include "fuzzoracle/environments.hpp"
#include "fuzzoracle/fuzzy_compliance.hpp"
#include "fuzzoracle/oracle.hpp"
#include "fuzzoracle/trend_analysis.hpp"

namespace fuzzoracle::io {

using Json = nlohmann::ordered_json;

// Decoders start from the documented defaults and overwrite only the keys
// present; unknown keys are rejected. `where` prefixes diagnostics.

Json encode(const EnvSpec& spec);
EnvSpec decode_env(const Json& j, const std::string& where = "env");

Json encode(const AgentConfig& config);
AgentConfig decode_agent(const Json& j, const std::string& where = "agent");

/// Worker count is an execution detail and is left out of the encoding.
Json encode(const OracleConfig& config);
OracleConfig decode_oracle(const Json& j, const std::string& where = "oracle");

Json encode(const TrendReport& report);

Json encode_state(const StatePoint& state);
StatePoint decode_state(const Json& j, bool grid, const std::string& where);
Json encode_action(const ActionPoint& action);
ActionPoint decode_action(const Json& j, bool discrete, const std::string& where);

/// Stand-alone policy document: env, metrics, shapes and entries.
Json encode_policy(const IntendedPolicy& policy, const EnvSpec& env, std::size_t policyId);

struct PolicyDocument {
  EnvSpec env;
  std::size_t policyId = 0;
  IntendedPolicy policy;
};
PolicyDocument decode_policy(const Json& j, const std::string& where = "policy");

/// 16 hex digits of FNV-1a over the canonical env encoding.
std::string env_fingerprint(const EnvSpec& spec);

/// Number rendered with 3 significant digits for human-facing views.
std::string three_significant(double value);

}  // namespace fuzzoracle::io
