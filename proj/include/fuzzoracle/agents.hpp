#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fuzzoracle/environments.hpp"
#include "fuzzoracle/space.hpp"

namespace fuzzoracle {

enum class Algorithm { TabularQ, LinearActorCritic };

/// Radial-basis features over the normalized state box.
struct FeatureSpec {
  std::size_t centersPerDim = 7;
  double width = 0.12;  // in normalized units
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

/// Behavior-level overrides used by the bug registry. A clean agent leaves
/// all of them false.
struct BehaviorOverrides {
  bool negateReward = false;
  bool skipUpdates = false;
  bool staleNextState = false;
  bool updateEveryOther = false;
  bool permuteFeatures = false;
  bool halveActionRange = false;

  friend bool operator==(const BehaviorOverrides&, const BehaviorOverrides&) = default;
};

struct AgentConfig {
  Algorithm algorithm = Algorithm::TabularQ;
  double learningRate = 0.5;         // Q step size / actor step size
  double criticLearningRate = 0.2;   // actor-critic only
  double discount = 0.9;
  double epsilonStart = 1.0;
  double epsilonEnd = 0.0;
  double noiseStddev = 0.3;          // actor-critic Gaussian exploration
  double initialValue = 0.0;
  FeatureSpec features;
  std::uint64_t seed = 0;
  BehaviorOverrides behavior;
  std::optional<std::string> injectedBug;

  static AgentConfig tabular_q();
  static AgentConfig actor_critic();

  /// Range checks; skipped for configs carrying an injected bug, which may
  /// hold deliberately out-of-range values.
  void validate() const;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

/// Linear decay from epsilonStart to epsilonEnd over training progress in [0, 1].
double exploration_rate(const AgentConfig& config, double progress);

class Agent {
 public:
  virtual ~Agent() = default;

  virtual ActionPoint act(const StatePoint& state, double epochProgress) = 0;
  /// Throws Error(NumericalDivergence) and leaves the agent untouched when the
  /// update would produce a non-finite value.
  virtual void update(const Transition& transition) = 0;

  [[nodiscard]] virtual const AgentConfig& config() const = 0;
};

class TabularQAgent final : public Agent {
 public:
  TabularQAgent(AgentConfig config, const EnvSpec& env);

  ActionPoint act(const StatePoint& state, double epochProgress) override;
  void update(const Transition& transition) override;
  [[nodiscard]] const AgentConfig& config() const override { return config_; }

  [[nodiscard]] const std::vector<double>& table() const { return q_; }
  [[nodiscard]] double q(const GridCell& cell, std::size_t action) const;
  [[nodiscard]] std::size_t greedy(const GridCell& cell) const;

 private:
  [[nodiscard]] std::size_t row_of(const GridCell& cell, bool forUpdate) const;

  AgentConfig config_;
  EnvSpec env_;
  std::size_t actions_;
  std::vector<double> q_;
  std::mt19937_64 rng_;
  std::size_t updateCount_ = 0;
};

class LinearActorCriticAgent final : public Agent {
 public:
  LinearActorCriticAgent(AgentConfig config, const EnvSpec& env);

  ActionPoint act(const StatePoint& state, double epochProgress) override;
  void update(const Transition& transition) override;
  [[nodiscard]] const AgentConfig& config() const override { return config_; }

  [[nodiscard]] const std::vector<double>& actor_weights() const { return actor_; }
  [[nodiscard]] const std::vector<double>& critic_weights() const { return critic_; }
  [[nodiscard]] std::vector<double> features(const StatePoint& state) const;
  [[nodiscard]] double mean_action(const StatePoint& state) const;

 private:
  [[nodiscard]] std::vector<double> update_features(const StatePoint& state) const;
  [[nodiscard]] std::pair<double, double> action_bounds() const;

  AgentConfig config_;
  EnvSpec env_;
  std::vector<double> actor_;
  std::vector<double> critic_;
  std::mt19937_64 rng_;
  std::size_t updateCount_ = 0;
};

/// Builds the agent for `config`; tabular Q needs a grid, the actor-critic a
/// continuous environment.
std::unique_ptr<Agent> agent_init(const AgentConfig& config, const EnvSpec& env);

}  // namespace fuzzoracle
