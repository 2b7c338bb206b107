#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fuzzoracle/space.hpp"
#include "fuzzoracle/trace.hpp"

namespace fuzzoracle {

enum class StateMetricKind {
  Manhattan,            // grid cells
  Euclidean,            // raw coordinates
  NormalizedEuclidean,  // coordinates rescaled to [0, 1] per dimension first
};

struct StateMetric {
  StateMetricKind kind = StateMetricKind::Manhattan;
  // Per-dimension bounds, only read by NormalizedEuclidean.
  std::vector<double> lower;
  std::vector<double> upper;

  static StateMetric manhattan() { return {}; }
  static StateMetric euclidean() { return {StateMetricKind::Euclidean, {}, {}}; }
  static StateMetric normalized(std::vector<double> lower, std::vector<double> upper);

  double operator()(const StatePoint& a, const StatePoint& b) const;
};

enum class ActionMetricKind {
  Discrete,   // 0 when equal, +infinity otherwise
  Euclidean,
};

struct ActionMetric {
  ActionMetricKind kind = ActionMetricKind::Discrete;

  static ActionMetric discrete() { return {}; }
  static ActionMetric euclidean() { return {ActionMetricKind::Euclidean}; }

  double operator()(const ActionPoint& a, const ActionPoint& b) const;
};

enum class ShapeKind {
  Linear,     // max(0, 1 - d / r)
  Indicator,  // 1 at d == 0, else 0
  Gaussian,   // exp(-0.5 * (d / (width * r))^2)
};

/// Non-increasing membership function of a distance with shape(0) == 1.
/// `radius` is the distance scale r; when unset the caller's fallback is used
/// (half the minimum reference distance for states).
struct MembershipShape {
  ShapeKind kind = ShapeKind::Linear;
  std::optional<double> radius;
  double width = 0.5;

  static MembershipShape linear(std::optional<double> radius = std::nullopt) {
    return {ShapeKind::Linear, radius, 0.5};
  }
  static MembershipShape indicator() { return {ShapeKind::Indicator, std::nullopt, 0.5}; }
  static MembershipShape gaussian(double width, std::optional<double> radius = std::nullopt) {
    return {ShapeKind::Gaussian, radius, width};
  }

  double operator()(double distance, double fallbackRadius) const;
};

struct PolicyEntry {
  StatePoint reference;
  ActionPoint ideal;
};

/// Finite map from reference states to ideal actions plus the metrics and
/// membership shapes used to score compliance against it. The minimum
/// pairwise reference distance is computed once at construction.
class IntendedPolicy {
 public:
  IntendedPolicy(std::vector<PolicyEntry> entries, StateMetric stateMetric,
                 ActionMetric actionMetric, MembershipShape stateShape,
                 MembershipShape actionShape);

  [[nodiscard]] const std::vector<PolicyEntry>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const StateMetric& state_metric() const { return stateMetric_; }
  [[nodiscard]] const ActionMetric& action_metric() const { return actionMetric_; }
  [[nodiscard]] const MembershipShape& state_shape() const { return stateShape_; }
  [[nodiscard]] const MembershipShape& action_shape() const { return actionShape_; }
  [[nodiscard]] double min_reference_distance() const { return minRefDistance_; }

 private:
  std::vector<PolicyEntry> entries_;
  StateMetric stateMetric_;
  ActionMetric actionMetric_;
  MembershipShape stateShape_;
  MembershipShape actionShape_;
  double minRefDistance_ = 0.0;
};

double min_reference_distance(std::span<const StatePoint> references, const StateMetric& metric);

struct ClosestReference {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Nearest reference state; ties go to the lowest entry index (exact
/// comparison of computed distances).
ClosestReference closest_reference(const StatePoint& state, const IntendedPolicy& policy);

double state_compliance(double distance, double delta,
                        const MembershipShape& shape = MembershipShape::linear());

double action_compliance(const ActionPoint& action, const ActionPoint& ideal,
                         const ActionMetric& metric, const MembershipShape& shape);

double step_compliance(double muState, double muAction);

struct StepAssessment {
  ClosestReference closest;
  double muState = 0.0;
  double muAction = 0.0;
  double muStep = 0.0;
};

StepAssessment assess_step(const StatePoint& state, const ActionPoint& action,
                           const IntendedPolicy& policy);

/// R_step = rewardScale * mu_step.
double fuzzy_reward(const StatePoint& state, const ActionPoint& action,
                    const IntendedPolicy& policy, double rewardScale = 1.0);

/// Which membership a step must reach to count toward an epoch's
/// compliance value.
enum class ComplianceFilter {
  StateMembership,  // mu_state >= theta (default)
  StepMembership,   // mu_step >= theta
};

ComplianceSeries policy_compliance_series(
    const IntendedPolicy& policy, const RunLog& log, double threshold,
    ComplianceFilter filter = ComplianceFilter::StateMembership);

/// Single-epoch compliance value; 0 when no step qualifies.
double epoch_compliance(const IntendedPolicy& policy, std::span<const TraceStep> steps,
                        double threshold,
                        ComplianceFilter filter = ComplianceFilter::StateMembership);

}  // namespace fuzzoracle
