#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fuzzoracle/oracle.hpp"

namespace fuzzoracle {

/// Positive class = Buggy.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  [[nodiscard]] std::size_t total() const { return tp + fp + tn + fn; }
  void add(Label predicted, Label actual);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// A metric whose denominator is zero is left empty.
struct ConfusionMetrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> falsePositiveRate;
  std::optional<double> falseNegativeRate;
};

ConfusionMetrics confusion_metrics(const ConfusionMatrix& m);

struct ProgramOutcome {
  std::size_t trueCount = 0;
  std::size_t policyCount = 0;
  Label groundTruth = Label::NonBuggy;
};

struct RocPoint {
  double threshold = 0.0;
  std::optional<double> fpr;
  std::optional<double> tpr;
};

/// Re-labels each program from its stored true-count ratio at every
/// threshold (no retraining) and reports FPR/TPR with Buggy as positive.
std::vector<RocPoint> roc_sweep(std::span<const ProgramOutcome> programs,
                                std::span<const double> thresholds);

/// 0.0, 0.1, ..., 1.0
std::vector<double> default_roc_thresholds();

}  // namespace fuzzoracle
