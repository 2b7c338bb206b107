#include "fuzzoracle/environments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

bool in_grid(const GridSpec& g, const GridCell& c) {
  return c.row >= 0 && c.row < g.rows && c.col >= 0 && c.col < g.cols;
}

GridCell move(const GridSpec& g, GridCell c, std::size_t action) {
  switch (action) {
    case kLeft: c.col = std::max(c.col - 1, 0); break;
    case kDown: c.row = std::min(c.row + 1, g.rows - 1); break;
    case kRight: c.col = std::min(c.col + 1, g.cols - 1); break;
    case kUp: c.row = std::max(c.row - 1, 0); break;
    default: break;
  }
  return c;
}

double native_reward(const EnvSpec& spec, const ActionPoint& action, const StatePoint& next) {
  if (spec.kind == EnvKind::Grid) {
    return std::get<GridCell>(next) == spec.grid.goal ? 1.0 : 0.0;
  }
  const double a = std::get<ContinuousAction>(action).values.at(0);
  const double bonus = std::get<Coordinates>(next)[0] >= spec.hillcar.goalPosition ? 100.0 : 0.0;
  return bonus - 0.1 * a * a;
}

}  // namespace

EnvSpec EnvSpec::frozen_lake() { return EnvSpec{}; }

EnvSpec EnvSpec::hill_car() {
  EnvSpec spec;
  spec.kind = EnvKind::HillCar;
  spec.maxStepsPerEpoch = 200;
  return spec;
}

void EnvSpec::validate() const {
  if (maxStepsPerEpoch < 1) throw Error(ErrorCode::InvalidEnvSpec, "maxStepsPerEpoch must be >= 1");
  if (kind == EnvKind::Grid) {
    if (grid.rows < 1 || grid.cols < 1 || grid.rows * grid.cols < 2) {
      throw Error(ErrorCode::InvalidEnvSpec, "grid needs at least 2 cells");
    }
    if (!in_grid(grid, grid.goal)) throw Error(ErrorCode::InvalidEnvSpec, "goal outside grid");
    for (const auto& h : grid.holes) {
      if (!in_grid(grid, h)) throw Error(ErrorCode::InvalidEnvSpec, "hole outside grid");
      if (h == grid.goal) throw Error(ErrorCode::InvalidEnvSpec, "hole on the goal cell");
      if (h == GridCell{0, 0}) throw Error(ErrorCode::InvalidEnvSpec, "hole on the start cell");
    }
    if (grid.goal == GridCell{0, 0}) {
      throw Error(ErrorCode::InvalidEnvSpec, "goal on the start cell");
    }
    if (!(grid.slipProbability >= 0.0 && grid.slipProbability <= 1.0)) {
      throw Error(ErrorCode::InvalidEnvSpec, "slip probability outside [0, 1]");
    }
    return;
  }
  const auto& h = hillcar;
  if (!(h.minPosition < h.maxPosition) || !(h.minVelocity < h.maxVelocity) ||
      !(h.minAction < h.maxAction)) {
    throw Error(ErrorCode::InvalidEnvSpec, "hill-car bounds must be well ordered");
  }
  if (!(h.goalPosition > h.minPosition && h.goalPosition <= h.maxPosition)) {
    throw Error(ErrorCode::InvalidEnvSpec, "goal position outside position bounds");
  }
  if (!(-0.6 >= h.minPosition && -0.4 <= h.maxPosition)) {
    throw Error(ErrorCode::InvalidEnvSpec, "start interval [-0.6, -0.4] outside position bounds");
  }
  if (!(h.force > 0.0) || !(h.gravity >= 0.0)) {
    throw Error(ErrorCode::InvalidEnvSpec, "force must be positive and gravity non-negative");
  }
}

bool EnvSpec::is_terminal(const StatePoint& state) const {
  if (kind == EnvKind::Grid) {
    const auto& c = std::get<GridCell>(state);
    return c == grid.goal || std::find(grid.holes.begin(), grid.holes.end(), c) != grid.holes.end();
  }
  return std::get<Coordinates>(state)[0] >= hillcar.goalPosition;
}

bool EnvSpec::contains(const StatePoint& state) const {
  if (kind == EnvKind::Grid) {
    const auto* c = std::get_if<GridCell>(&state);
    return c != nullptr && in_grid(grid, *c);
  }
  const auto* x = std::get_if<Coordinates>(&state);
  if (x == nullptr || x->size() != 2) return false;
  return (*x)[0] >= hillcar.minPosition && (*x)[0] <= hillcar.maxPosition &&
         (*x)[1] >= hillcar.minVelocity && (*x)[1] <= hillcar.maxVelocity;
}

bool EnvSpec::valid_action(const ActionPoint& action) const {
  if (kind == EnvKind::Grid) {
    const auto* a = std::get_if<DiscreteAction>(&action);
    return a != nullptr && a->id < kGridActionCount;
  }
  const auto* a = std::get_if<ContinuousAction>(&action);
  return a != nullptr && a->values.size() == 1 && std::isfinite(a->values[0]);
}

std::vector<GridCell> EnvSpec::open_cells() const {
  std::vector<GridCell> cells;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (!is_terminal(GridCell{r, c})) cells.push_back({r, c});
    }
  }
  return cells;
}

std::size_t EnvSpec::cell_index(const GridCell& cell) const {
  return static_cast<std::size_t>(cell.row * grid.cols + cell.col);
}

std::size_t EnvSpec::state_count() const {
  return static_cast<std::size_t>(grid.rows * grid.cols);
}

std::size_t EnvSpec::action_count() const { return kGridActionCount; }

std::vector<double> EnvSpec::state_lower() const {
  if (kind == EnvKind::Grid) return {0.0, 0.0};
  return {hillcar.minPosition, hillcar.minVelocity};
}

std::vector<double> EnvSpec::state_upper() const {
  if (kind == EnvKind::Grid) return {double(grid.rows - 1), double(grid.cols - 1)};
  return {hillcar.maxPosition, hillcar.maxVelocity};
}

StatePoint env_reset(const EnvSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.kind == EnvKind::Grid) return GridCell{0, 0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> start(-0.6, -0.4);
  return Coordinates{start(rng), 0.0};
}

Transition env_step(const EnvSpec& spec, const StatePoint& state, const ActionPoint& action,
                    const RewardFn& reward, std::mt19937_64* slip) {
  if (!spec.contains(state)) throw Error(ErrorCode::InvalidState, "state " + to_string(state));
  if (!spec.valid_action(action)) {
    throw Error(ErrorCode::InvalidAction, "action " + to_string(action));
  }

  Transition t{state, action, 0.0, state, false, false, false};
  if (spec.kind == EnvKind::Grid) {
    std::size_t dir = std::get<DiscreteAction>(action).id;
    if (spec.grid.slipProbability > 0.0 && slip != nullptr) {
      std::bernoulli_distribution slipped(spec.grid.slipProbability);
      if (slipped(*slip)) {
        // Slip to one of the two perpendicular directions.
        std::bernoulli_distribution clockwise(0.5);
        dir = (dir + (clockwise(*slip) ? 1 : kGridActionCount - 1)) % kGridActionCount;
      }
    }
    t.nextState = move(spec.grid, std::get<GridCell>(state), dir);
  } else {
    const auto& h = spec.hillcar;
    const auto& x = std::get<Coordinates>(state);
    double a = std::get<ContinuousAction>(action).values[0];
    if (a < h.minAction || a > h.maxAction) {
      a = std::clamp(a, h.minAction, h.maxAction);
      t.actionClamped = true;
      t.action = ContinuousAction{{a}};
    }
    double velocity = x[1] + a * h.force - h.gravity * std::cos(3.0 * x[0]);
    velocity = std::clamp(velocity, h.minVelocity, h.maxVelocity);
    double position = std::clamp(x[0] + velocity, h.minPosition, h.maxPosition);
    if (position == h.minPosition && velocity < 0.0) velocity = 0.0;
    t.nextState = Coordinates{position, velocity};
  }

  t.done = spec.is_terminal(t.nextState);
  const double injected = reward ? reward(t.state, t.action) : 0.0;
  t.reward = spec.rewardMode == RewardMode::Replace
                 ? injected
                 : injected + native_reward(spec, t.action, t.nextState);
  return t;
}

Environment::Environment(EnvSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  state_ = env_reset(spec_, 0);
}

StatePoint Environment::reset(std::uint64_t seed) {
  state_ = env_reset(spec_, seed);
  steps_ = 0;
  slip_.seed(derive_seed(seed, 0x51u));
  return state_;
}

Transition Environment::step(const ActionPoint& action, const RewardFn& reward) {
  auto t = env_step(spec_, state_, action, reward, &slip_);
  ++steps_;
  if (t.actionClamped) ++clampedActions_;
  if (steps_ >= spec_.maxStepsPerEpoch && !t.done) {
    t.done = true;
    t.truncated = true;
  }
  state_ = t.nextState;
  return t;
}

}  // namespace fuzzoracle
