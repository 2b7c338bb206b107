#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fuzzoracle/space.hpp"

namespace fuzzoracle {

enum class EnvKind { Grid, HillCar };

/// Grid actions follow the FrozenLake numbering.
enum GridAction : std::size_t { kLeft = 0, kDown = 1, kRight = 2, kUp = 3 };
inline constexpr std::size_t kGridActionCount = 4;

struct GridSpec {
  int rows = 4;
  int cols = 4;
  std::vector<GridCell> holes{{1, 1}, {1, 3}, {2, 3}, {3, 0}};
  GridCell goal{3, 3};
  double slipProbability = 0.0;
};

struct HillCarSpec {
  double minPosition = -1.2;
  double maxPosition = 0.6;
  double minVelocity = -0.07;
  double maxVelocity = 0.07;
  double force = 0.0015;
  double gravity = 0.0025;
  double goalPosition = 0.45;
  double minAction = -1.0;
  double maxAction = 1.0;
};

/// How the environment's own reward combines with the injected one.
enum class RewardMode { Replace, Add };

struct EnvSpec {
  EnvKind kind = EnvKind::Grid;
  GridSpec grid;
  HillCarSpec hillcar;
  std::size_t maxStepsPerEpoch = 200;
  RewardMode rewardMode = RewardMode::Replace;

  static EnvSpec frozen_lake();
  static EnvSpec hill_car();

  void validate() const;

  [[nodiscard]] bool is_terminal(const StatePoint& state) const;
  [[nodiscard]] bool contains(const StatePoint& state) const;
  [[nodiscard]] bool valid_action(const ActionPoint& action) const;

  /// Non-terminal grid cells in row-major order (grid only).
  [[nodiscard]] std::vector<GridCell> open_cells() const;
  [[nodiscard]] std::size_t cell_index(const GridCell& cell) const;
  [[nodiscard]] std::size_t state_count() const;  // grid only
  [[nodiscard]] std::size_t action_count() const;  // grid only
  [[nodiscard]] std::vector<double> state_lower() const;
  [[nodiscard]] std::vector<double> state_upper() const;
};

struct Transition {
  StatePoint state;
  ActionPoint action;
  double reward = 0.0;
  StatePoint nextState;
  bool done = false;
  bool truncated = false;  // done only because the step budget ran out
  bool actionClamped = false;
};

using RewardFn = std::function<double(const StatePoint&, const ActionPoint&)>;

/// Start state: (0, 0) on the grid, position ~ U[-0.6, -0.4] with zero
/// velocity on the hill-car.
StatePoint env_reset(const EnvSpec& spec, std::uint64_t seed);

/// One transition. `done` reflects terminal states only; the step budget is
/// tracked by Environment. `slip` is consulted only for slippery grids.
Transition env_step(const EnvSpec& spec, const StatePoint& state, const ActionPoint& action,
                    const RewardFn& reward, std::mt19937_64* slip = nullptr);

/// Single-owner rollout wrapper adding the step budget and a counter of
/// clamped out-of-range actions.
class Environment {
 public:
  explicit Environment(EnvSpec spec);

  StatePoint reset(std::uint64_t seed);
  Transition step(const ActionPoint& action, const RewardFn& reward);

  [[nodiscard]] const EnvSpec& spec() const { return spec_; }
  [[nodiscard]] const StatePoint& state() const { return state_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }
  [[nodiscard]] std::size_t clamped_actions() const { return clampedActions_; }

 private:
  EnvSpec spec_;
  StatePoint state_;
  std::size_t steps_ = 0;
  std::size_t clampedActions_ = 0;
  std::mt19937_64 slip_;
};

}  // namespace fuzzoracle
