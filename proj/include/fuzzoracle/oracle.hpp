#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzoracle/agents.hpp"
#include "fuzzoracle/environments.hpp"
#include "fuzzoracle/fuzzy_compliance.hpp"
#include "fuzzoracle/trace.hpp"
#include "fuzzoracle/trend_analysis.hpp"

namespace fuzzoracle {

enum class Label { NonBuggy, Buggy };

std::string_view to_string(Label label);

struct OracleConfig {
  std::size_t policyCount = 10;         // I
  std::size_t epochs = 300;             // E
  double oracleThreshold = 0.7;         // theta_orcl
  TrendParams trend;                    // n, epsilon, Delta
  double complianceThreshold = 0.3;     // theta_poli-cmpl
  ComplianceFilter filter = ComplianceFilter::StateMembership;
  std::optional<std::size_t> policySize;  // |S*|; per-environment default when unset
  std::uint64_t masterSeed = 0;
  double rewardScale = 1.0;
  std::size_t workers = 0;  // 0 = hardware concurrency

  void validate() const;
  [[nodiscard]] std::size_t resolved_policy_size(const EnvSpec& env) const;
};

/// Default |S*|: 4 reference states on grids, 3 on the hill-car.
std::size_t default_policy_size(const EnvSpec& env);

/// Metrics and membership shapes the generator attaches to policies for `env`.
StateMetric default_state_metric(const EnvSpec& env);
ActionMetric default_action_metric(const EnvSpec& env);
MembershipShape default_action_shape(const EnvSpec& env);

/// One policy from its own seed. Grid references are drawn without
/// replacement from non-terminal cells; continuous references are
/// rejection-sampled at normalized pairwise distance >= 0.1.
IntendedPolicy generate_policy(const EnvSpec& env, std::size_t policySize, std::uint64_t seed);

/// `count` policies; policy i uses derive_seed(seed, i) so adding policies
/// never perturbs earlier ones.
std::vector<IntendedPolicy> generate_policies(const EnvSpec& env, std::size_t count,
                                              std::size_t policySize, std::uint64_t seed);

/// The policies oracle_main trains against for this configuration.
std::vector<IntendedPolicy> oracle_policies(const EnvSpec& env, const OracleConfig& config);

/// Trains a fresh agent for `epochs` epochs against the fuzzy reward of
/// `policy`, logging every (state, action). An epoch whose update diverges is
/// cut short and flagged aborted; training continues with the next epoch.
RunLog run_training_phase(const AgentConfig& agentConfig, const EnvSpec& env,
                          const IntendedPolicy& policy, std::size_t epochs, std::uint64_t seed,
                          double rewardScale = 1.0, std::size_t policyId = 0);

/// The program under test: anything that turns an intended policy into a
/// training log.
class Program {
 public:
  virtual ~Program() = default;

  [[nodiscard]] virtual RunLog train(const EnvSpec& env, const IntendedPolicy& policy,
                                     std::size_t policyId, std::size_t epochs,
                                     std::uint64_t seed, double rewardScale) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// A built-in agent, optionally carrying an injected bug.
class AgentProgram final : public Program {
 public:
  explicit AgentProgram(AgentConfig config) : config_(std::move(config)) {}

  [[nodiscard]] RunLog train(const EnvSpec& env, const IntendedPolicy& policy,
                             std::size_t policyId, std::size_t epochs, std::uint64_t seed,
                             double rewardScale) const override;
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] const AgentConfig& config() const { return config_; }

 private:
  AgentConfig config_;
};

/// Positive control: every logged step sits on a reference state and takes
/// its ideal action, so every compliance value is exactly 1.
class PerfectComplianceProgram final : public Program {
 public:
  explicit PerfectComplianceProgram(std::size_t stepsPerEpoch = 8) : steps_(stepsPerEpoch) {}

  [[nodiscard]] RunLog train(const EnvSpec& env, const IntendedPolicy& policy,
                             std::size_t policyId, std::size_t epochs, std::uint64_t seed,
                             double rewardScale) const override;
  [[nodiscard]] std::string name() const override { return "perfect_stub"; }

 private:
  std::size_t steps_;
};

struct PolicyOutcome {
  std::size_t policyId = 0;
  IntendedPolicy policy;
  ComplianceSeries series;
  TrendReport trend;
  std::size_t abortedEpochs = 0;
  std::optional<RunLog> log;  // kept only when requested
};

struct Verdict {
  Label label = Label::Buggy;
  std::vector<PolicyOutcome> perPolicy;
  std::size_t trueCount = 0;
  double ratio = 0.0;
};

/// NonBuggy iff trueCount / total >= threshold.
Label decide(std::size_t trueCount, std::size_t total, double threshold);

/// Trend verdict for one analysed run; a run with no usable epochs is
/// unhealthy.
TrendReport judge_series(const ComplianceSeries& series, const RunLog& log,
                         const TrendParams& params);

struct OracleOptions {
  bool retainLogs = false;
};

/// Generates I policies, trains the program against each on a bounded
/// worker pool, analyses every log and aggregates the verdict.
Verdict oracle_main(const Program& program, const EnvSpec& env, const OracleConfig& config,
                    const OracleOptions& options = {});

/// Re-derives the label from the stored per-policy trend reports.
Label recompute_label(const Verdict& verdict, double threshold);

}  // namespace fuzzoracle
