#include "fuzzoracle/trend_analysis.hpp"

#include <algorithm>
#include <string>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle {

namespace {

double spread(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

void require_window(std::size_t window, std::size_t length) {
  if (window < 1 || window > length) {
    throw Error(ErrorCode::InvalidWindow, "window " + std::to_string(window) +
                                              " is outside [1, " + std::to_string(length) + "]");
  }
}

}  // namespace

double linreg_slope(std::span<const double> series) {
  if (series.size() < 2) {
    throw Error(ErrorCode::SeriesTooShort, "slope needs at least 2 points");
  }
  // x is centred, so the deviations pair up as +dx / -dx around the middle.
  // Summing dx * (y_hi - y_lo) over the pairs needs no mean of y: a constant
  // series gives exactly 0 and adding a constant cannot move the result.
  const std::size_t n = series.size();
  const double meanX = (static_cast<double>(n) - 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double dx = static_cast<double>(j) - meanX;
    sxy += dx * (series[j] - series[i]);
    sxx += 2.0 * dx * dx;
  }
  return sxy / sxx;
}

std::optional<std::size_t> convergence_start(std::span<const double> series, std::size_t window,
                                             double epsilon) {
  require_window(window, series.size());
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidWindow, "convergence epsilon must be positive");
  }
  for (std::size_t i = 0; i + window <= series.size(); ++i) {
    if (spread(series.subspan(i, window)) <= epsilon) return i;
  }
  return std::nullopt;
}

TrendReport trend_analysis(std::span<const double> series, const TrendParams& params) {
  if (series.size() < 2) throw Error(ErrorCode::SeriesTooShort, "trend needs at least 2 points");
  if (params.window < 1 || params.window + 1 > series.size()) {
    throw Error(ErrorCode::InvalidWindow,
                "window " + std::to_string(params.window) + " needs a series longer than " +
                    std::to_string(params.window) + " epochs");
  }
  if (!(params.abnormalityDelta > 0.0)) {
    throw Error(ErrorCode::InvalidWindow, "abnormality delta must be positive");
  }

  TrendReport report;
  report.slope = linreg_slope(series);
  report.convergenceIndex = convergence_start(series, params.window, params.convergenceEpsilon);

  if (report.slope < 0.0) {
    report.verdict = false;
    return report;
  }
  if (!report.convergenceIndex) return report;

  const std::size_t start = *report.convergenceIndex;
  const double windowSpread = spread(series.subspan(start, params.window));
  const double lowerBound = series[start] - std::max(windowSpread, params.abnormalityDelta);
  report.lowerBound = lowerBound;

  std::size_t run = 0;
  for (std::size_t j = start + 1; j < series.size(); ++j) {
    run = series[j] < lowerBound ? run + 1 : 0;
    if (run >= params.window) {
      report.abnormalityFound = true;
      report.verdict = false;
      break;
    }
  }
  return report;
}

}  // namespace fuzzoracle
