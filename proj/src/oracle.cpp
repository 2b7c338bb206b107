#include "fuzzoracle/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

// Independent random streams hanging off one seed.
constexpr std::uint64_t kPolicyStream = 0x01;
constexpr std::uint64_t kTrainStream = 0x02;
constexpr std::uint64_t kAgentStream = 0x03;
constexpr std::uint64_t kResetStream = 0x04;

constexpr std::size_t kMaxRejectionAttempts = 10000;
constexpr double kMinNormalizedSeparation = 0.1;

void require_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidOracleConfig, std::string(what) + " must lie in [0, 1]");
  }
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failureMutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

IntendedPolicy grid_policy(const EnvSpec& env, std::size_t size, std::mt19937_64& rng) {
  auto cells = env.open_cells();
  if (size > cells.size()) {
    throw Error(ErrorCode::PolicyTooLarge, "policy size " + std::to_string(size) + " exceeds " +
                                               std::to_string(cells.size()) + " open cells");
  }
  std::uniform_int_distribution<std::size_t> pickAction(0, kGridActionCount - 1);
  std::vector<PolicyEntry> entries;
  entries.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
    std::swap(cells[i], cells[pick(rng)]);
    entries.push_back({cells[i], DiscreteAction{pickAction(rng)}});
  }
  return IntendedPolicy(std::move(entries), default_state_metric(env), default_action_metric(env),
                        MembershipShape::linear(), default_action_shape(env));
}

// States a uniformly random controller visits from the start distribution.
std::vector<Coordinates> reachable_states(const EnvSpec& env, std::mt19937_64& rng) {
  constexpr std::size_t kRollouts = 20;
  std::uniform_real_distribution<double> pickAction(env.hillcar.minAction, env.hillcar.maxAction);
  std::vector<Coordinates> pool;
  Environment environment(env);
  for (std::size_t r = 0; r < kRollouts; ++r) {
    environment.reset(rng());
    for (bool done = false; !done;) {
      pool.push_back(std::get<Coordinates>(environment.state()));
      done = environment.step(ContinuousAction{{pickAction(rng)}}, nullptr).done;
    }
  }
  return pool;
}

IntendedPolicy continuous_policy(const EnvSpec& env, std::size_t size, std::mt19937_64& rng) {
  const auto metric = default_state_metric(env);
  const auto pool = reachable_states(env, rng);
  std::uniform_int_distribution<std::size_t> pickState(0, pool.size() - 1);
  std::uniform_real_distribution<double> pickAction(env.hillcar.minAction, env.hillcar.maxAction);

  std::vector<PolicyEntry> entries;
  std::size_t attempts = 0;
  while (entries.size() < size) {
    if (++attempts > kMaxRejectionAttempts) {
      throw Error(ErrorCode::SamplingExhausted, "could not place " + std::to_string(size) +
                                                    " separated reference states");
    }
    const StatePoint candidate = pool[pickState(rng)];
    const bool separated = std::all_of(entries.begin(), entries.end(), [&](const PolicyEntry& e) {
      return metric(candidate, e.reference) >= kMinNormalizedSeparation;
    });
    if (!separated) continue;
    entries.push_back({candidate, ContinuousAction{{pickAction(rng)}}});
  }
  return IntendedPolicy(std::move(entries), metric, default_action_metric(env),
                        MembershipShape::linear(), default_action_shape(env));
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::Buggy ? "Buggy" : "NonBuggy"; }

void OracleConfig::validate() const {
  if (policyCount < 1) throw Error(ErrorCode::InvalidOracleConfig, "need at least 1 policy");
  if (epochs < 2) throw Error(ErrorCode::InvalidOracleConfig, "need at least 2 epochs");
  require_unit(oracleThreshold, "theta_orcl");
  require_unit(complianceThreshold, "theta_poli_cmpl");
  if (trend.window < 1 || trend.window > epochs - 1) {
    throw Error(ErrorCode::InvalidOracleConfig, "window n must lie in [1, E - 1]");
  }
  if (!(trend.convergenceEpsilon > 0.0) || !(trend.abnormalityDelta > 0.0)) {
    throw Error(ErrorCode::InvalidOracleConfig, "epsilon and delta must be positive");
  }
  if (policySize && *policySize < 2) {
    throw Error(ErrorCode::InvalidOracleConfig, "policy size must be >= 2");
  }
  if (!(rewardScale > 0.0) || !std::isfinite(rewardScale)) {
    throw Error(ErrorCode::InvalidOracleConfig, "reward scale must be positive");
  }
}

std::size_t OracleConfig::resolved_policy_size(const EnvSpec& env) const {
  return policySize.value_or(default_policy_size(env));
}

std::size_t default_policy_size(const EnvSpec& env) { return env.kind == EnvKind::Grid ? 4 : 3; }

StateMetric default_state_metric(const EnvSpec& env) {
  if (env.kind == EnvKind::Grid) return StateMetric::manhattan();
  return StateMetric::normalized(env.state_lower(), env.state_upper());
}

ActionMetric default_action_metric(const EnvSpec& env) {
  return env.kind == EnvKind::Grid ? ActionMetric::discrete() : ActionMetric::euclidean();
}

MembershipShape default_action_shape(const EnvSpec& env) {
  if (env.kind == EnvKind::Grid) return MembershipShape::indicator();
  return MembershipShape::linear(env.hillcar.maxAction - env.hillcar.minAction);
}

IntendedPolicy generate_policy(const EnvSpec& env, std::size_t policySize, std::uint64_t seed) {
  env.validate();
  if (policySize < 2) throw Error(ErrorCode::PolicyTooSmall, "policy size must be >= 2");
  std::mt19937_64 rng(seed);
  return env.kind == EnvKind::Grid ? grid_policy(env, policySize, rng)
                                   : continuous_policy(env, policySize, rng);
}

std::vector<IntendedPolicy> generate_policies(const EnvSpec& env, std::size_t count,
                                              std::size_t policySize, std::uint64_t seed) {
  std::vector<IntendedPolicy> policies;
  policies.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    policies.push_back(generate_policy(env, policySize, derive_seed(seed, kPolicyStream, i)));
  }
  return policies;
}

RunLog run_training_phase(const AgentConfig& agentConfig, const EnvSpec& env,
                          const IntendedPolicy& policy, std::size_t epochs, std::uint64_t seed,
                          double rewardScale, std::size_t policyId) {
  AgentConfig config = agentConfig;
  config.seed = derive_seed(seed, kAgentStream);
  auto agent = agent_init(config, env);
  Environment environment(env);
  const RewardFn reward = [&](const StatePoint& s, const ActionPoint& a) {
    return fuzzy_reward(s, a, policy, rewardScale);
  };

  RunLog log;
  log.policyId = policyId;
  log.epochs.reserve(epochs);
  for (std::size_t e = 1; e <= epochs; ++e) {
    const double progress =
        epochs > 1 ? static_cast<double>(e - 1) / static_cast<double>(epochs - 1) : 1.0;
    EpochTrace trace;
    trace.epochIndex = e;
    StatePoint state = environment.reset(derive_seed(seed, kResetStream, e));
    for (;;) {
      const auto action = agent->act(state, progress);
      const auto t = environment.step(action, reward);
      trace.steps.push_back({t.state, t.action, t.reward});
      try {
        agent->update(t);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::NumericalDivergence) throw;
        trace.aborted = true;
        break;
      }
      if (t.done) break;
      state = t.nextState;
    }
    log.epochs.push_back(std::move(trace));
  }
  return log;
}

RunLog AgentProgram::train(const EnvSpec& env, const IntendedPolicy& policy, std::size_t policyId,
                           std::size_t epochs, std::uint64_t seed, double rewardScale) const {
  return run_training_phase(config_, env, policy, epochs, seed, rewardScale, policyId);
}

std::string AgentProgram::name() const {
  std::string base = config_.algorithm == Algorithm::TabularQ ? "tabular_q" : "linear_actor_critic";
  if (config_.injectedBug) base += "+" + *config_.injectedBug;
  return base;
}

RunLog PerfectComplianceProgram::train(const EnvSpec&, const IntendedPolicy& policy,
                                       std::size_t policyId, std::size_t epochs, std::uint64_t,
                                       double rewardScale) const {
  RunLog log;
  log.policyId = policyId;
  for (std::size_t e = 1; e <= epochs; ++e) {
    EpochTrace trace;
    trace.epochIndex = e;
    for (std::size_t j = 0; j < std::max<std::size_t>(steps_, 1); ++j) {
      const auto& entry = policy.entries()[j % policy.size()];
      trace.steps.push_back(
          {entry.reference, entry.ideal, fuzzy_reward(entry.reference, entry.ideal, policy, rewardScale)});
    }
    log.epochs.push_back(std::move(trace));
  }
  return log;
}

Label decide(std::size_t trueCount, std::size_t total, double threshold) {
  if (total == 0) return Label::Buggy;
  const double ratio = static_cast<double>(trueCount) / static_cast<double>(total);
  return ratio >= threshold ? Label::NonBuggy : Label::Buggy;
}

TrendReport judge_series(const ComplianceSeries& series, const RunLog& log,
                         const TrendParams& params) {
  if (!log.epochs.empty() && log.aborted_epochs() == log.epochs.size()) {
    TrendReport unusable;
    unusable.verdict = false;
    return unusable;
  }
  return trend_analysis(series.values, params);
}

std::vector<IntendedPolicy> oracle_policies(const EnvSpec& env, const OracleConfig& config) {
  config.validate();
  return generate_policies(env, config.policyCount, config.resolved_policy_size(env),
                           derive_seed(config.masterSeed, kPolicyStream));
}

Verdict oracle_main(const Program& program, const EnvSpec& env, const OracleConfig& config,
                    const OracleOptions& options) {
  config.validate();
  env.validate();
  const auto policies = oracle_policies(env, config);

  std::vector<std::optional<PolicyOutcome>> slots(policies.size());
  const std::size_t workers =
      config.workers > 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  parallel_for(policies.size(), workers, [&](std::size_t i) {
    auto log = program.train(env, policies[i], i, config.epochs,
                             derive_seed(config.masterSeed, kTrainStream, i), config.rewardScale);
    auto series =
        policy_compliance_series(policies[i], log, config.complianceThreshold, config.filter);
    auto trend = judge_series(series, log, config.trend);
    PolicyOutcome outcome{i, policies[i], std::move(series), trend, log.aborted_epochs(),
                          std::nullopt};
    if (options.retainLogs) outcome.log = std::move(log);
    slots[i] = std::move(outcome);
  });

  Verdict verdict;
  verdict.perPolicy.reserve(slots.size());
  for (auto& slot : slots) {
    if (slot->trend.verdict) ++verdict.trueCount;
    verdict.perPolicy.push_back(std::move(*slot));
  }
  verdict.ratio = static_cast<double>(verdict.trueCount) / static_cast<double>(slots.size());
  verdict.label = decide(verdict.trueCount, slots.size(), config.oracleThreshold);
  return verdict;
}

Label recompute_label(const Verdict& verdict, double threshold) {
  const auto healthy = std::count_if(verdict.perPolicy.begin(), verdict.perPolicy.end(),
                                     [](const PolicyOutcome& p) { return p.trend.verdict; });
  return decide(static_cast<std::size_t>(healthy), verdict.perPolicy.size(), threshold);
}

}  // namespace fuzzoracle
