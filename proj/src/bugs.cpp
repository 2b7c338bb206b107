#include "fuzzoracle/bugs.hpp"

#include <algorithm>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

std::string_view to_string(BugCategory category) {
  switch (category) {
    case BugCategory::Training: return "training";
    case BugCategory::Model: return "model";
    case BugCategory::UpdatingNetwork: return "updatingNetwork";
    case BugCategory::Exploration: return "exploration";
  }
  return "unknown";
}

const std::vector<BugDescriptor>& bug_registry() {
  static const std::vector<BugDescriptor> registry = {
      {"LR_ZERO", BugCategory::Training, "learning rate forced to 0",
       [](AgentConfig& c) { c.learningRate = 0.0; }},
      {"REWARD_NEGATED", BugCategory::Training, "agent observes the negated reward",
       [](AgentConfig& c) { c.behavior.negateReward = true; }},
      {"DISCOUNT_GT_ONE", BugCategory::Training, "discount factor set to 1.2",
       [](AgentConfig& c) { c.discount = 1.2; }},
      {"Q_INIT_HUGE", BugCategory::Model, "value estimates initialized to 1e6",
       [](AgentConfig& c) { c.initialValue = 1e6; }},
      {"WRONG_FEATURE_MAP", BugCategory::Model,
       "updates read a feature map shifted by one slot relative to acting",
       [](AgentConfig& c) { c.behavior.permuteFeatures = true; }},
      {"UPDATE_SKIPPED", BugCategory::UpdatingNetwork, "every update is dropped",
       [](AgentConfig& c) { c.behavior.skipUpdates = true; }},
      {"STALE_STATE", BugCategory::UpdatingNetwork,
       "bootstrap target uses the current state instead of the next state",
       [](AgentConfig& c) { c.behavior.staleNextState = true; }},
      {"UPDATE_EVERY_OTHER", BugCategory::UpdatingNetwork, "every second update is dropped",
       [](AgentConfig& c) { c.behavior.updateEveryOther = true; }},
      {"EPSILON_FROZEN_ONE", BugCategory::Exploration, "exploration rate stuck at 1 (pure random)",
       [](AgentConfig& c) { c.epsilonStart = 1.0; c.epsilonEnd = 1.0; }},
      {"EPSILON_ZERO_START", BugCategory::Exploration, "no exploration at all",
       [](AgentConfig& c) { c.epsilonStart = 0.0; c.epsilonEnd = 0.0; c.noiseStddev = 0.0; }},
      {"ACTION_CLAMP_WRONG", BugCategory::Exploration, "actions clamped to half the action range",
       [](AgentConfig& c) { c.behavior.halveActionRange = true; }},
  };
  return registry;
}

const BugDescriptor* find_bug(std::string_view id) {
  const auto& registry = bug_registry();
  const auto it = std::find_if(registry.begin(), registry.end(),
                               [&](const BugDescriptor& b) { return b.id == id; });
  return it == registry.end() ? nullptr : &*it;
}

AgentConfig inject_bug(AgentConfig config, std::string_view bugId) {
  const auto* bug = find_bug(bugId);
  if (bug == nullptr) throw Error(ErrorCode::UnknownBug, "no bug named '" + std::string(bugId) + "'");
  bug->mutate(config);
  config.injectedBug = bug->id;
  return config;
}

}  // namespace fuzzoracle
