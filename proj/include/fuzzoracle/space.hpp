#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fuzzoracle {

struct GridCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

using Coordinates = std::vector<double>;

/// A visited state: a cell for grid worlds, a coordinate vector for
/// continuous spaces.
using StatePoint = std::variant<GridCell, Coordinates>;

struct DiscreteAction {
  std::size_t id = 0;

  friend bool operator==(const DiscreteAction&, const DiscreteAction&) = default;
};

struct ContinuousAction {
  std::vector<double> values;

  friend bool operator==(const ContinuousAction&, const ContinuousAction&) = default;
};

using ActionPoint = std::variant<DiscreteAction, ContinuousAction>;

inline bool is_grid(const StatePoint& s) { return std::holds_alternative<GridCell>(s); }
inline bool is_discrete(const ActionPoint& a) { return std::holds_alternative<DiscreteAction>(a); }

std::string to_string(const StatePoint& state);
std::string to_string(const ActionPoint& action);

/// Deterministic 64-bit seed derivation (splitmix64 over the inputs). Used so
/// every stream of randomness hangs off a single master seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace fuzzoracle
