#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzoracle/agents.hpp"

namespace fuzzoracle {

enum class BugCategory { Training, Model, UpdatingNetwork, Exploration };

std::string_view to_string(BugCategory category);

struct BugDescriptor {
  std::string id;
  BugCategory category;
  std::string description;
  std::function<void(AgentConfig&)> mutate;
};

/// Built-in mutation registry, ordered by category then id.
const std::vector<BugDescriptor>& bug_registry();

/// nullptr when the id is not registered.
const BugDescriptor* find_bug(std::string_view id);

/// Returns `config` with the named mutation applied and `injectedBug` set.
AgentConfig inject_bug(AgentConfig config, std::string_view bugId);

}  // namespace fuzzoracle
