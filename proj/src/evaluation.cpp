#include "fuzzoracle/evaluation.hpp"

#include <algorithm>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionMatrix::add(Label predicted, Label actual) {
  if (actual == Label::Buggy) {
    predicted == Label::Buggy ? ++tp : ++fn;
  } else {
    predicted == Label::Buggy ? ++fp : ++tn;
  }
}

ConfusionMetrics confusion_metrics(const ConfusionMatrix& m) {
  if (m.total() == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix is all zero");
  ConfusionMetrics out;
  out.accuracy = ratio(m.tp + m.tn, m.total());
  out.precision = ratio(m.tp, m.tp + m.fp);
  out.recall = ratio(m.tp, m.tp + m.fn);
  out.falsePositiveRate = ratio(m.fp, m.fp + m.tn);
  out.falseNegativeRate = ratio(m.fn, m.fn + m.tp);
  if (out.precision && out.recall && *out.precision + *out.recall > 0.0) {
    out.f1 = 2.0 * *out.precision * *out.recall / (*out.precision + *out.recall);
  }
  return out;
}

std::vector<double> default_roc_thresholds() {
  std::vector<double> thresholds;
  for (int i = 0; i <= 10; ++i) thresholds.push_back(i / 10.0);
  return thresholds;
}

std::vector<RocPoint> roc_sweep(std::span<const ProgramOutcome> programs,
                                std::span<const double> thresholds) {
  if (programs.empty()) throw Error(ErrorCode::EmptyCorpus, "no programs to sweep");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::InvalidThresholds, "thresholds must be sorted ascending");
  }
  for (const auto& p : programs) {
    if (p.policyCount == 0 || p.trueCount > p.policyCount) {
      throw Error(ErrorCode::InvalidThresholds, "program true count exceeds its policy count");
    }
  }

  std::vector<RocPoint> curve;
  curve.reserve(thresholds.size());
  for (double theta : thresholds) {
    if (!(theta >= 0.0)) throw Error(ErrorCode::InvalidThresholds, "thresholds must be >= 0");
    ConfusionMatrix m;
    for (const auto& p : programs) m.add(decide(p.trueCount, p.policyCount, theta), p.groundTruth);
    curve.push_back({theta, ratio(m.fp, m.fp + m.tn), ratio(m.tp, m.tp + m.fn)});
  }
  return curve;
}

}  // namespace fuzzoracle
