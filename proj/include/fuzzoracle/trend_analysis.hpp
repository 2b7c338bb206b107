#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace fuzzoracle {

struct TrendParams {
  std::size_t window = 5;            // n
  double convergenceEpsilon = 0.05;  // max spread of a converged window
  double abnormalityDelta = 0.1;     // floor on the post-convergence drop tolerance
};

struct TrendReport {
  double slope = 0.0;
  std::optional<std::size_t> convergenceIndex;
  std::optional<double> lowerBound;
  bool abnormalityFound = false;
  bool verdict = true;  // true = healthy learning trend

  friend bool operator==(const TrendReport&, const TrendReport&) = default;
};

/// Ordinary least-squares slope of the values against indices 0..size-1.
double linreg_slope(std::span<const double> series);

/// Smallest i such that series[i, i + window) spreads by at most epsilon.
std::optional<std::size_t> convergence_start(std::span<const double> series, std::size_t window,
                                             double epsilon);

/// Slope check followed by the post-convergence abnormality scan.
///
/// A negative slope is unhealthy. Otherwise, when the series converges at
/// index c, the tolerated floor is series[c] - max(spread of the converged
/// window, abnormalityDelta); `window` consecutive values strictly below
/// that floor after c mark a behavioral abnormality.
TrendReport trend_analysis(std::span<const double> series, const TrendParams& params);

}  // namespace fuzzoracle
