#include "fuzzoracle/agents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NumericalDivergence, std::string(what) + " became non-finite");
  }
}

double bootstrap_weight(const Transition& t) { return t.done && !t.truncated ? 0.0 : 1.0; }

}  // namespace

AgentConfig AgentConfig::tabular_q() { return AgentConfig{}; }

AgentConfig AgentConfig::actor_critic() {
  AgentConfig c;
  c.algorithm = Algorithm::LinearActorCritic;
  c.learningRate = 0.03;
  c.criticLearningRate = 0.1;
  c.discount = 0.5;
  c.epsilonStart = 0.0;
  c.epsilonEnd = 0.0;
  c.noiseStddev = 0.3;
  return c;
}

void AgentConfig::validate() const {
  if (features.centersPerDim < 1 || !(features.width > 0.0)) {
    throw Error(ErrorCode::InvalidAgentConfig, "feature spec needs >= 1 center and positive width");
  }
  if (injectedBug) return;
  if (!(learningRate > 0.0)) throw Error(ErrorCode::InvalidAgentConfig, "learningRate must be > 0");
  if (algorithm == Algorithm::LinearActorCritic && !(criticLearningRate > 0.0)) {
    throw Error(ErrorCode::InvalidAgentConfig, "criticLearningRate must be > 0");
  }
  if (!(discount >= 0.0 && discount <= 1.0)) {
    throw Error(ErrorCode::InvalidAgentConfig, "discount must lie in [0, 1]");
  }
  if (!(epsilonStart <= 1.0 && epsilonStart >= epsilonEnd && epsilonEnd >= 0.0)) {
    throw Error(ErrorCode::InvalidAgentConfig, "need 1 >= epsilonStart >= epsilonEnd >= 0");
  }
  if (!(noiseStddev >= 0.0)) throw Error(ErrorCode::InvalidAgentConfig, "noiseStddev must be >= 0");
}

double exploration_rate(const AgentConfig& config, double progress) {
  const double p = std::clamp(progress, 0.0, 1.0);
  return config.epsilonStart + (config.epsilonEnd - config.epsilonStart) * p;
}

// --- tabular Q-learning ----------------------------------------------------

TabularQAgent::TabularQAgent(AgentConfig config, const EnvSpec& env)
    : config_(std::move(config)), env_(env), actions_(env.action_count()), rng_(config_.seed) {
  q_.assign(env_.state_count() * actions_, config_.initialValue);
}

std::size_t TabularQAgent::row_of(const GridCell& cell, bool forUpdate) const {
  const std::size_t idx = env_.cell_index(cell);
  if (forUpdate && config_.behavior.permuteFeatures) return (idx + 1) % env_.state_count();
  return idx;
}

double TabularQAgent::q(const GridCell& cell, std::size_t action) const {
  return q_[env_.cell_index(cell) * actions_ + action];
}

std::size_t TabularQAgent::greedy(const GridCell& cell) const {
  const std::size_t base = row_of(cell, false) * actions_;
  std::size_t best = 0;
  for (std::size_t a = 1; a < actions_; ++a) {
    if (q_[base + a] > q_[base + best]) best = a;
  }
  return best;
}

ActionPoint TabularQAgent::act(const StatePoint& state, double epochProgress) {
  const auto& cell = std::get<GridCell>(state);
  const double epsilon = exploration_rate(config_, epochProgress);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::size_t action = 0;
  if (coin(rng_) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, actions_ - 1);
    action = pick(rng_);
  } else {
    action = greedy(cell);
  }
  if (config_.behavior.halveActionRange) action = std::min(action, actions_ / 2 - 1);
  return DiscreteAction{action};
}

void TabularQAgent::update(const Transition& t) {
  const auto& b = config_.behavior;
  const std::size_t n = updateCount_++;
  if (b.skipUpdates || (b.updateEveryOther && n % 2 == 1)) return;

  const auto& cell = std::get<GridCell>(t.state);
  const auto& next = b.staleNextState ? cell : std::get<GridCell>(t.nextState);
  const std::size_t action = std::get<DiscreteAction>(t.action).id;
  const double reward = b.negateReward ? -t.reward : t.reward;

  const std::size_t nextBase = row_of(next, true) * actions_;
  const double nextMax = *std::max_element(q_.begin() + static_cast<std::ptrdiff_t>(nextBase),
                                           q_.begin() + static_cast<std::ptrdiff_t>(nextBase + actions_));
  double& entry = q_[row_of(cell, true) * actions_ + action];
  const double target = reward + config_.discount * nextMax * bootstrap_weight(t);
  const double updated = entry + config_.learningRate * (target - entry);
  require_finite(updated, "Q value");
  entry = updated;
}

// --- linear actor-critic ---------------------------------------------------

LinearActorCriticAgent::LinearActorCriticAgent(AgentConfig config, const EnvSpec& env)
    : config_(std::move(config)), env_(env), rng_(config_.seed) {
  const std::size_t k = config_.features.centersPerDim;
  const std::size_t count = k * k + 1;
  actor_.assign(count, 0.0);
  critic_.assign(count, config_.initialValue);
}

std::vector<double> LinearActorCriticAgent::features(const StatePoint& state) const {
  const auto& x = std::get<Coordinates>(state);
  const auto lo = env_.state_lower();
  const auto hi = env_.state_upper();
  const double u = (x[0] - lo[0]) / (hi[0] - lo[0]);
  const double v = (x[1] - lo[1]) / (hi[1] - lo[1]);

  const std::size_t k = config_.features.centersPerDim;
  const double w2 = 2.0 * config_.features.width * config_.features.width;
  std::vector<double> phi;
  phi.reserve(k * k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const double cu = k == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
      const double cv = k == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(k - 1);
      const double d2 = (u - cu) * (u - cu) + (v - cv) * (v - cv);
      phi.push_back(std::exp(-d2 / w2));
    }
  }
  phi.push_back(1.0);
  return phi;
}

std::vector<double> LinearActorCriticAgent::update_features(const StatePoint& state) const {
  auto phi = features(state);
  if (config_.behavior.permuteFeatures) std::rotate(phi.begin(), phi.begin() + 1, phi.end());
  return phi;
}

std::pair<double, double> LinearActorCriticAgent::action_bounds() const {
  double lo = env_.hillcar.minAction;
  double hi = env_.hillcar.maxAction;
  if (config_.behavior.halveActionRange) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.25 * (hi - lo);
    lo = mid - half;
    hi = mid + half;
  }
  return {lo, hi};
}

double LinearActorCriticAgent::mean_action(const StatePoint& state) const {
  const auto phi = features(state);
  double activation = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) activation += actor_[i] * phi[i];
  const auto [lo, hi] = action_bounds();
  return 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::tanh(activation);
}

ActionPoint LinearActorCriticAgent::act(const StatePoint& state, double epochProgress) {
  const auto [lo, hi] = action_bounds();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double a = 0.0;
  if (coin(rng_) < exploration_rate(config_, epochProgress)) {
    std::uniform_real_distribution<double> uniform(lo, hi);
    a = uniform(rng_);
  } else {
    a = mean_action(state);
    if (config_.noiseStddev > 0.0) {
      std::normal_distribution<double> noise(0.0, config_.noiseStddev);
      a += noise(rng_);
    }
  }
  return ContinuousAction{{std::clamp(a, lo, hi)}};
}

void LinearActorCriticAgent::update(const Transition& t) {
  const auto& b = config_.behavior;
  const std::size_t n = updateCount_++;
  if (b.skipUpdates || (b.updateEveryOther && n % 2 == 1)) return;

  const auto phi = update_features(t.state);
  const auto phiNext = update_features(b.staleNextState ? t.state : t.nextState);
  const double reward = b.negateReward ? -t.reward : t.reward;

  double value = 0.0;
  double nextValue = 0.0;
  double activation = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    value += critic_[i] * phi[i];
    nextValue += critic_[i] * phiNext[i];
    activation += actor_[i] * phi[i];
  }
  const double tdError = reward + config_.discount * nextValue * bootstrap_weight(t) - value;

  // Gaussian score through the tanh squashing of the mean.
  const auto [lo, hi] = action_bounds();
  const double halfRange = 0.5 * (hi - lo);
  const double squashed = std::tanh(activation);
  const double mean = 0.5 * (lo + hi) + halfRange * squashed;
  const double a = std::get<ContinuousAction>(t.action).values.at(0);
  const double variance = std::max(config_.noiseStddev * config_.noiseStddev, 1e-4);
  const double score = (a - mean) / variance * halfRange * (1.0 - squashed * squashed);

  auto critic = critic_;
  auto actor = actor_;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    critic[i] += config_.criticLearningRate * tdError * phi[i];
    actor[i] += config_.learningRate * tdError * score * phi[i];
    require_finite(critic[i], "critic weight");
    require_finite(actor[i], "actor weight");
  }
  critic_ = std::move(critic);
  actor_ = std::move(actor);
}

std::unique_ptr<Agent> agent_init(const AgentConfig& config, const EnvSpec& env) {
  config.validate();
  env.validate();
  if (config.algorithm == Algorithm::TabularQ) {
    if (env.kind != EnvKind::Grid) {
      throw Error(ErrorCode::AlgorithmEnvMismatch, "tabular Q-learning needs a discrete grid");
    }
    return std::make_unique<TabularQAgent>(config, env);
  }
  if (env.kind != EnvKind::HillCar) {
    throw Error(ErrorCode::AlgorithmEnvMismatch, "the linear actor-critic needs a continuous space");
  }
  return std::make_unique<LinearActorCriticAgent>(config, env);
}

}  // namespace fuzzoracle
