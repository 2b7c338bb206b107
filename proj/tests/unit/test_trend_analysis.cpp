#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "brute_force.hpp"
#include "fuzzoracle/error.hpp"
#include "fuzzoracle/trend_analysis.hpp"

using namespace fuzzoracle;

namespace {

TrendParams params(std::size_t n, double eps, double delta = 0.1) { return {n, eps, delta}; }

std::vector<double> converge_then_drop(std::size_t dropLength) {
  std::vector<double> s{0.1, 0.3, 0.5, 0.7};
  for (int i = 0; i < 10; ++i) s.push_back(0.9);
  for (std::size_t i = 0; i < dropLength; ++i) s.push_back(0.2);
  for (int i = 0; i < 30; ++i) s.push_back(0.9);  // keep the slope non-negative
  return s;
}

}  // namespace

TEST(LinregSlope, Examples) {
  EXPECT_DOUBLE_EQ(linreg_slope(std::vector<double>{0, 1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(linreg_slope(std::vector<double>{0.4, 0.4, 0.4, 0.4}), 0.0);
}

TEST(LinregSlope, MatchesClosedForm) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(50);
    for (auto& v : y) v = u(rng);
    EXPECT_NEAR(linreg_slope(y), brute::ols_slope(y), 1e-12);
  }
}

TEST(LinregSlope, TooShort) {
  try {
    linreg_slope(std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SeriesTooShort);
  }
}

TEST(ConvergenceStart, Examples) {
  EXPECT_EQ(convergence_start(std::vector<double>(10, 0.3), 3, 0.01), 0u);
  EXPECT_EQ(convergence_start(std::vector<double>{0, 1, 2, 3, 4, 5}, 3, 0.5), std::nullopt);
  EXPECT_EQ(convergence_start(std::vector<double>{0.1, 0.5, 0.9, 0.9, 0.9, 0.9}, 3, 0.05), 2u);
}

TEST(ConvergenceStart, WindowTooLong) {
  try {
    convergence_start(std::vector<double>{1, 2, 3}, 4, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWindow);
  }
}

TEST(TrendAnalysis, DecreasingIsUnhealthy) {
  auto r = trend_analysis(std::vector<double>{0.9, 0.8, 0.7, 0.6, 0.5}, params(2, 0.05));
  EXPECT_LT(r.slope, 0.0);
  EXPECT_FALSE(r.verdict);
}

TEST(TrendAnalysis, IncreasingWithoutConvergenceIsHealthy) {
  std::vector<double> s;
  for (int i = 0; i < 20; ++i) s.push_back(0.05 * i);
  auto r = trend_analysis(s, params(5, 0.05));
  EXPECT_FALSE(r.convergenceIndex.has_value());
  EXPECT_TRUE(r.verdict);
}

TEST(TrendAnalysis, ConvergeThenDropIsAbnormal) {
  auto s = converge_then_drop(5);
  auto r = trend_analysis(s, params(5, 0.05, 0.1));
  ASSERT_TRUE(r.convergenceIndex.has_value());
  EXPECT_EQ(*r.convergenceIndex, 4u);
  // window spread 0 < delta, so the floor is 0.9 - 0.1
  EXPECT_DOUBLE_EQ(*r.lowerBound, 0.8);
  EXPECT_GE(r.slope, 0.0);
  EXPECT_TRUE(r.abnormalityFound);
  EXPECT_FALSE(r.verdict);
}

TEST(TrendAnalysis, DropShorterThanWindowRecovers) {
  auto r = trend_analysis(converge_then_drop(4), params(5, 0.05, 0.1));
  EXPECT_GE(r.slope, 0.0);
  EXPECT_FALSE(r.abnormalityFound);
  EXPECT_TRUE(r.verdict);
}

TEST(TrendAnalysis, ViolationIsStrict) {
  // values exactly on the floor do not count
  std::vector<double> s(10, 0.9);
  for (int i = 0; i < 5; ++i) s.push_back(0.9 - 0.125);
  for (int i = 0; i < 20; ++i) s.push_back(0.9);
  auto r = trend_analysis(s, params(5, 0.05, 0.125));
  EXPECT_FALSE(r.abnormalityFound);
}

TEST(TrendAnalysis, WindowSpreadWidensFloor) {
  // converged window spreads 0.04 (> delta 0.01): floor is alpha[c] - 0.04
  std::vector<double> s{0.50, 0.54, 0.52, 0.51, 0.53};
  for (int i = 0; i < 3; ++i) s.push_back(0.47);
  for (int i = 0; i < 10; ++i) s.push_back(0.55);
  auto r = trend_analysis(s, params(3, 0.05, 0.01));
  ASSERT_EQ(r.convergenceIndex, 0u);
  EXPECT_NEAR(*r.lowerBound, 0.46, 1e-12);
  EXPECT_FALSE(r.abnormalityFound);
}

TEST(TrendAnalysis, RejectsShortSeries) {
  try {
    trend_analysis(std::vector<double>{0.1, 0.2, 0.3}, params(3, 0.05));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWindow);
  }
}

// --- properties ---

TEST(TrendProperties, ShiftInvariance) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    // dyadic values and shifts keep the arithmetic exact
    std::vector<double> s(30), t(30);
    const double shift = double(1 + rng() % 8) / 4.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = double(rng() % 16) / 16.0;
      t[i] = s[i] + shift;
    }
    auto a = trend_analysis(s, params(3, 0.125));
    auto b = trend_analysis(t, params(3, 0.125));
    EXPECT_NEAR(a.slope, b.slope, 1e-12);
    EXPECT_EQ(a.convergenceIndex, b.convergenceIndex);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(TrendProperties, NegativeSlopeAlwaysUnhealthy) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> s(20);
    double level = 1.0;
    for (auto& v : s) {
      level -= 0.02 + 0.03 * u(rng);
      v = level;
    }
    TrendParams p{1 + rng() % 10, 0.01 + u(rng), 0.01 + u(rng)};
    EXPECT_FALSE(trend_analysis(s, p).verdict);
  }
}

TEST(TrendProperties, NoConvergenceAndRisingIsHealthy) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(25);
    for (auto& v : s) v = u(rng);
    const std::size_t n = 2 + rng() % 4;
    auto r = trend_analysis(s, params(n, 0.02));
    if (!r.convergenceIndex && r.slope >= 0) {
      EXPECT_TRUE(r.verdict);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(TrendProperties, ConvergenceIndexIsMinimal) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(30);
    for (auto& v : s) v = double(rng() % 5) / 10.0;
    const std::size_t n = 2 + rng() % 3;
    auto got = convergence_start(s, n, 0.1);
    EXPECT_EQ(got, brute::first_flat_window(s, n, 0.1));
    if (got && *got > 0) {
      auto lo = std::min_element(s.begin() + (*got - 1), s.begin() + (*got - 1 + n));
      auto hi = std::max_element(s.begin() + (*got - 1), s.begin() + (*got - 1 + n));
      EXPECT_GT(*hi - *lo, 0.1);
    }
  }
}
