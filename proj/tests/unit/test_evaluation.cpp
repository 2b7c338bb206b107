#include <gtest/gtest.h>

#include <random>

#include "fuzzoracle/error.hpp"
#include "fuzzoracle/evaluation.hpp"

using namespace fuzzoracle;

TEST(ConfusionMetrics, PublishedMountainCarRow) {
  ConfusionMatrix m{10, 0, 2, 10};
  auto r = confusion_metrics(m);
  EXPECT_NEAR(*r.accuracy, 12.0 / 22.0, 1e-15);
  EXPECT_DOUBLE_EQ(*r.precision, 1.0);
  EXPECT_DOUBLE_EQ(*r.recall, 0.5);
  EXPECT_NEAR(*r.f1, 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(*r.falsePositiveRate, 0.0);
  EXPECT_DOUBLE_EQ(*r.falseNegativeRate, 0.5);
}

TEST(ConfusionMetrics, UndefinedWhenDenominatorIsZero) {
  auto r = confusion_metrics(ConfusionMatrix{0, 0, 3, 2});
  EXPECT_FALSE(r.precision.has_value());
  EXPECT_FALSE(r.f1.has_value());
  EXPECT_DOUBLE_EQ(*r.recall, 0.0);
  auto s = confusion_metrics(ConfusionMatrix{4, 0, 0, 0});
  EXPECT_FALSE(s.falsePositiveRate.has_value());
  EXPECT_DOUBLE_EQ(*s.falseNegativeRate, 0.0);
}

TEST(ConfusionMetrics, EmptyMatrix) {
  try {
    confusion_metrics(ConfusionMatrix{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMatrix);
  }
}

TEST(ConfusionMatrix, AddUsesBuggyAsPositive) {
  ConfusionMatrix m;
  m.add(Label::Buggy, Label::Buggy);
  m.add(Label::Buggy, Label::NonBuggy);
  m.add(Label::NonBuggy, Label::NonBuggy);
  m.add(Label::NonBuggy, Label::Buggy);
  m.add(Label::NonBuggy, Label::Buggy);
  EXPECT_EQ(m, (ConfusionMatrix{1, 1, 1, 2}));
  EXPECT_EQ(m.total(), 5u);
}

TEST(ConfusionMetrics, MatchHandFormulas) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    ConfusionMatrix m{rng() % 20, rng() % 20, rng() % 20, rng() % 20};
    if (m.total() == 0) continue;
    const double tp = m.tp, fp = m.fp, tn = m.tn, fn = m.fn;
    auto r = confusion_metrics(m);
    EXPECT_DOUBLE_EQ(*r.accuracy, (tp + tn) / (tp + fp + tn + fn));
    if (tp + fp > 0) EXPECT_DOUBLE_EQ(*r.precision, tp / (tp + fp));
    if (tp + fn > 0) EXPECT_DOUBLE_EQ(*r.recall, tp / (tp + fn));
    if (fp + tn > 0) EXPECT_DOUBLE_EQ(*r.falsePositiveRate, fp / (fp + tn));
    if (tp + fn > 0) EXPECT_DOUBLE_EQ(*r.falseNegativeRate, fn / (tp + fn));
    if (tp > 0) EXPECT_NEAR(*r.f1, 2 * tp / (2 * tp + fp + fn), 1e-12);
  }
}

TEST(RocSweep, Endpoints) {
  std::vector<ProgramOutcome> corpus{{10, 10, Label::NonBuggy}, {3, 10, Label::Buggy}, {0, 10, Label::Buggy}};
  const std::vector<double> thresholds{0.0, 1.0 + 1e-9};
  auto roc = roc_sweep(corpus, thresholds);
  EXPECT_EQ(*roc[0].tpr, 0.0);
  EXPECT_EQ(*roc[0].fpr, 0.0);
  EXPECT_EQ(*roc[1].tpr, 1.0);
  EXPECT_EQ(*roc[1].fpr, 1.0);
}

TEST(RocSweep, DefaultGridHasElevenPoints) {
  const auto t = default_roc_thresholds();
  ASSERT_EQ(t.size(), 11u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
}

TEST(RocSweep, InputValidation) {
  std::vector<ProgramOutcome> none;
  const std::vector<double> ok{0.0, 0.5};
  EXPECT_THROW(roc_sweep(none, ok), Error);
  std::vector<ProgramOutcome> one{{1, 2, Label::Buggy}};
  const std::vector<double> unsorted{0.5, 0.1};
  EXPECT_THROW(roc_sweep(one, unsorted), Error);
  const std::vector<double> negative{-0.1, 0.5};
  EXPECT_THROW(roc_sweep(one, negative), Error);
}

TEST(RocProperties, MatchesRecountAndIsMonotone) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ProgramOutcome> corpus;
    for (int i = 0; i < 12; ++i) {
      corpus.push_back({rng() % 11, 10, rng() % 2 ? Label::Buggy : Label::NonBuggy});
    }
    std::vector<double> thresholds;
    for (int k = 0; k <= 20; ++k) thresholds.push_back(k / 20.0);
    thresholds.push_back(1.0 + 1e-9);
    const auto roc = roc_sweep(corpus, thresholds);
    ASSERT_EQ(roc.size(), thresholds.size());
    for (std::size_t k = 0; k < roc.size(); ++k) {
      double tp = 0, fp = 0, pos = 0, neg = 0;
      for (const auto& p : corpus) {
        const bool flagged = double(p.trueCount) / double(p.policyCount) < thresholds[k];
        if (p.groundTruth == Label::Buggy) {
          ++pos;
          tp += flagged;
        } else {
          ++neg;
          fp += flagged;
        }
      }
      if (pos > 0) EXPECT_DOUBLE_EQ(*roc[k].tpr, tp / pos);
      else EXPECT_FALSE(roc[k].tpr.has_value());
      if (neg > 0) EXPECT_DOUBLE_EQ(*roc[k].fpr, fp / neg);
      else EXPECT_FALSE(roc[k].fpr.has_value());
      if (k > 0 && pos > 0) EXPECT_GE(*roc[k].tpr, *roc[k - 1].tpr);
      if (k > 0 && neg > 0) EXPECT_GE(*roc[k].fpr, *roc[k - 1].fpr);
    }
  }
}
