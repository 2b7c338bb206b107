#include "fuzzoracle/fuzzy_compliance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Coordinates of a state as reals; grid cells become (row, col).
void require_same_arity(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::StateKindMismatch,
                "state arity " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double grid_distance(StateMetricKind kind, const GridCell& a, const GridCell& b) {
  const double dr = a.row - b.row;
  const double dc = a.col - b.col;
  if (kind == StateMetricKind::Manhattan) return std::abs(dr) + std::abs(dc);
  return std::sqrt(dr * dr + dc * dc);
}

void require_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidMembership,
                std::string(what) + " = " + std::to_string(value) + " is outside [0, 1]");
  }
}

}  // namespace

StateMetric StateMetric::normalized(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw Error(ErrorCode::InvalidEnvSpec, "normalization bounds must be non-empty and paired");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(upper[i] > lower[i])) {
      throw Error(ErrorCode::InvalidEnvSpec, "normalization bounds must be well ordered");
    }
  }
  return {StateMetricKind::NormalizedEuclidean, std::move(lower), std::move(upper)};
}

double StateMetric::operator()(const StatePoint& a, const StatePoint& b) const {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::StateKindMismatch, "cannot compare grid and continuous states");
  }
  if (const auto* ga = std::get_if<GridCell>(&a)) {
    const auto& gb = std::get<GridCell>(b);
    if (kind != StateMetricKind::NormalizedEuclidean) return grid_distance(kind, *ga, gb);
    require_same_arity(lower.size(), 2);
    const double dr = (ga->row - gb.row) / (upper[0] - lower[0]);
    const double dc = (ga->col - gb.col) / (upper[1] - lower[1]);
    return std::sqrt(dr * dr + dc * dc);
  }

  const auto& ca = std::get<Coordinates>(a);
  const auto& cb = std::get<Coordinates>(b);
  require_same_arity(ca.size(), cb.size());
  double acc = 0.0;
  switch (kind) {
    case StateMetricKind::Manhattan:
      for (std::size_t i = 0; i < ca.size(); ++i) acc += std::abs(ca[i] - cb[i]);
      return acc;
    case StateMetricKind::Euclidean:
      for (std::size_t i = 0; i < ca.size(); ++i) acc += (ca[i] - cb[i]) * (ca[i] - cb[i]);
      return std::sqrt(acc);
    case StateMetricKind::NormalizedEuclidean:
      require_same_arity(ca.size(), lower.size());
      for (std::size_t i = 0; i < ca.size(); ++i) {
        const double d = (ca[i] - cb[i]) / (upper[i] - lower[i]);
        acc += d * d;
      }
      return std::sqrt(acc);
  }
  return acc;
}

double ActionMetric::operator()(const ActionPoint& a, const ActionPoint& b) const {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::ActionKindMismatch, "cannot compare discrete and continuous actions");
  }
  if (const auto* da = std::get_if<DiscreteAction>(&a)) {
    const auto& db = std::get<DiscreteAction>(b);
    if (kind == ActionMetricKind::Discrete) return da->id == db.id ? 0.0 : kInfinity;
    return std::abs(static_cast<double>(da->id) - static_cast<double>(db.id));
  }
  const auto& va = std::get<ContinuousAction>(a).values;
  const auto& vb = std::get<ContinuousAction>(b).values;
  if (va.size() != vb.size()) {
    throw Error(ErrorCode::ActionKindMismatch, "continuous actions differ in dimension");
  }
  if (kind == ActionMetricKind::Discrete) return va == vb ? 0.0 : kInfinity;
  double acc = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) acc += (va[i] - vb[i]) * (va[i] - vb[i]);
  return std::sqrt(acc);
}

double MembershipShape::operator()(double distance, double fallbackRadius) const {
  if (std::isnan(distance) || distance < 0.0) {
    throw Error(ErrorCode::InvalidMembership, "distance must be non-negative");
  }
  if (kind == ShapeKind::Indicator) return distance == 0.0 ? 1.0 : 0.0;

  const double r = radius.value_or(fallbackRadius);
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidDelta, "membership radius must be positive");
  if (kind == ShapeKind::Linear) return std::max(0.0, 1.0 - distance / r);

  const double z = distance / (width * r);
  return std::exp(-0.5 * z * z);
}

IntendedPolicy::IntendedPolicy(std::vector<PolicyEntry> entries, StateMetric stateMetric,
                               ActionMetric actionMetric, MembershipShape stateShape,
                               MembershipShape actionShape)
    : entries_(std::move(entries)),
      stateMetric_(std::move(stateMetric)),
      actionMetric_(actionMetric),
      stateShape_(stateShape),
      actionShape_(actionShape) {
  if (entries_.size() < 2) {
    throw Error(ErrorCode::PolicyTooSmall, "an intended policy needs at least 2 reference states");
  }
  std::vector<StatePoint> refs;
  refs.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.ideal.index() != entries_.front().ideal.index()) {
      throw Error(ErrorCode::ActionKindMismatch, "ideal actions mix discrete and continuous");
    }
    refs.push_back(e.reference);
  }
  minRefDistance_ = fuzzoracle::min_reference_distance(refs, stateMetric_);
}

double min_reference_distance(std::span<const StatePoint> references, const StateMetric& metric) {
  if (references.size() < 2) {
    throw Error(ErrorCode::PolicyTooSmall, "need at least 2 reference states");
  }
  double best = kInfinity;
  for (std::size_t i = 0; i < references.size(); ++i) {
    for (std::size_t j = i + 1; j < references.size(); ++j) {
      const double d = metric(references[i], references[j]);
      if (!(d > 0.0)) {
        throw Error(ErrorCode::DuplicateReferenceState,
                    "reference states " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide");
      }
      best = std::min(best, d);
    }
  }
  return best;
}

ClosestReference closest_reference(const StatePoint& state, const IntendedPolicy& policy) {
  ClosestReference best{0, kInfinity};
  const auto& entries = policy.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double d = policy.state_metric()(state, entries[i].reference);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

double state_compliance(double distance, double delta, const MembershipShape& shape) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidDelta, "delta must be positive");
  if (std::isnan(distance) || distance < 0.0) {
    throw Error(ErrorCode::InvalidMembership, "distance must be non-negative");
  }
  const double half = 0.5 * delta;
  if (distance > half) return 0.0;
  return std::clamp(shape(distance, half), 0.0, 1.0);
}

double action_compliance(const ActionPoint& action, const ActionPoint& ideal,
                         const ActionMetric& metric, const MembershipShape& shape) {
  const double d = metric(action, ideal);
  return std::clamp(shape(d, 1.0), 0.0, 1.0);
}

double step_compliance(double muState, double muAction) {
  require_unit(muState, "mu_state");
  require_unit(muAction, "mu_action");
  return muState * muAction;
}

StepAssessment assess_step(const StatePoint& state, const ActionPoint& action,
                           const IntendedPolicy& policy) {
  StepAssessment out;
  out.closest = closest_reference(state, policy);
  out.muState = state_compliance(out.closest.distance, policy.min_reference_distance(),
                                 policy.state_shape());
  const auto& ideal = policy.entries()[out.closest.index].ideal;
  out.muAction = action_compliance(action, ideal, policy.action_metric(), policy.action_shape());
  out.muStep = step_compliance(out.muState, out.muAction);
  return out;
}

double fuzzy_reward(const StatePoint& state, const ActionPoint& action,
                    const IntendedPolicy& policy, double rewardScale) {
  if (!(rewardScale > 0.0)) {
    throw Error(ErrorCode::InvalidMembership, "reward scale must be positive");
  }
  return rewardScale * assess_step(state, action, policy).muStep;
}

double epoch_compliance(const IntendedPolicy& policy, std::span<const TraceStep> steps,
                        double threshold, ComplianceFilter filter) {
  double accumulated = 0.0;
  std::size_t qualifying = 0;
  for (const auto& step : steps) {
    const auto a = assess_step(step.state, step.action, policy);
    const double gate = filter == ComplianceFilter::StateMembership ? a.muState : a.muStep;
    if (gate >= threshold) {
      accumulated += a.muStep;
      ++qualifying;
    }
  }
  return qualifying > 0 ? accumulated / static_cast<double>(qualifying) : 0.0;
}

ComplianceSeries policy_compliance_series(const IntendedPolicy& policy, const RunLog& log,
                                          double threshold, ComplianceFilter filter) {
  require_unit(threshold, "compliance threshold");
  if (log.epochs.empty()) throw Error(ErrorCode::EmptyLog, "run log has no epochs");

  ComplianceSeries series;
  series.values.reserve(log.epochs.size());
  for (const auto& epoch : log.epochs) {
    if (epoch.steps.empty()) {
      throw Error(ErrorCode::EmptyLog, "epoch " + std::to_string(epoch.epochIndex) + " is empty");
    }
    series.values.push_back(epoch_compliance(policy, epoch.steps, threshold, filter));
  }
  return series;
}

}  // namespace fuzzoracle
