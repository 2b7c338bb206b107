#pragma once

// Straight-line reference implementations used as test oracles. Nothing here
// calls into the library's algorithms; only its plain data types are shared.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "fuzzoracle/fuzzy_compliance.hpp"
#include "fuzzoracle/trace.hpp"

namespace brute {

using fuzzoracle::ActionPoint;
using fuzzoracle::ContinuousAction;
using fuzzoracle::Coordinates;
using fuzzoracle::DiscreteAction;
using fuzzoracle::EpochTrace;
using fuzzoracle::GridCell;
using fuzzoracle::PolicyEntry;
using fuzzoracle::RunLog;
using fuzzoracle::StatePoint;
using fuzzoracle::TraceStep;

inline double manhattan(const StatePoint& a, const StatePoint& b) {
  const auto& x = std::get<GridCell>(a);
  const auto& y = std::get<GridCell>(b);
  return std::abs(double(x.row - y.row)) + std::abs(double(x.col - y.col));
}

inline std::function<double(const StatePoint&, const StatePoint&)> normalized(
    std::vector<double> lo, std::vector<double> hi) {
  return [lo, hi](const StatePoint& a, const StatePoint& b) {
    const auto& x = std::get<Coordinates>(a);
    const auto& y = std::get<Coordinates>(b);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = (x[i] - y[i]) / (hi[i] - lo[i]);
      s += d * d;
    }
    return std::sqrt(s);
  };
}

// Indicator for discrete ids, 1 - |a - a*| / 2 for scalar actions in [-1, 1].
inline double action_membership(const ActionPoint& a, const ActionPoint& ideal) {
  if (std::holds_alternative<DiscreteAction>(a)) {
    return std::get<DiscreteAction>(a).id == std::get<DiscreteAction>(ideal).id ? 1.0 : 0.0;
  }
  const auto& x = std::get<ContinuousAction>(a).values;
  const auto& y = std::get<ContinuousAction>(ideal).values;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::max(0.0, 1.0 - std::sqrt(s) / 2.0);
}

inline double min_pairwise(const std::vector<StatePoint>& pts,
                           const std::function<double(const StatePoint&, const StatePoint&)>& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) best = std::min(best, d(pts[i], pts[j]));
  return best;
}

// Per-epoch compliance with no caching: delta and the closest reference are
// recomputed for every single step.
inline std::vector<double> compliance_series(
    const std::vector<PolicyEntry>& policy, const RunLog& log, double theta, bool stepFilter,
    const std::function<double(const StatePoint&, const StatePoint&)>& dist) {
  std::vector<double> out;
  for (const EpochTrace& epoch : log.epochs) {
    double sum = 0.0;
    int count = 0;
    for (const TraceStep& step : epoch.steps) {
      std::vector<StatePoint> refs;
      for (const auto& e : policy) refs.push_back(e.reference);
      const double delta = min_pairwise(refs, dist);

      std::size_t closest = 0;
      double dmin = dist(step.state, policy[0].reference);
      for (std::size_t k = 1; k < policy.size(); ++k) {
        const double dk = dist(step.state, policy[k].reference);
        if (dk < dmin) {
          dmin = dk;
          closest = k;
        }
      }
      double muState = 0.0;
      if (!(dmin > delta / 2)) muState = std::max(0.0, 1.0 - dmin / (delta / 2));
      const double muAction = action_membership(step.action, policy[closest].ideal);
      const double muStep = muState * muAction;
      const double gate = stepFilter ? muStep : muState;
      if (gate >= theta) {
        sum += muStep;
        ++count;
      }
    }
    out.push_back(count > 0 ? sum / count : 0.0);
  }
  return out;
}

inline double ols_slope(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mx += double(i);
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += (double(i) - mx) * (y[i] - my);
    den += (double(i) - mx) * (double(i) - mx);
  }
  return num / den;
}

inline std::optional<std::size_t> first_flat_window(const std::vector<double>& y, std::size_t n,
                                                    double eps) {
  for (std::size_t i = 0; i + n <= y.size(); ++i) {
    double lo = y[i], hi = y[i];
    for (std::size_t k = i; k < i + n; ++k) {
      lo = std::min(lo, y[k]);
      hi = std::max(hi, y[k]);
    }
    if (hi - lo <= eps) return i;
  }
  return std::nullopt;
}

inline std::vector<GridCell> open_cells_4x4() {
  const std::vector<GridCell> blocked{{1, 1}, {1, 3}, {2, 3}, {3, 0}, {3, 3}};
  std::vector<GridCell> out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      bool skip = false;
      for (const auto& b : blocked) skip = skip || (b.row == r && b.col == c);
      if (!skip) out.push_back({r, c});
    }
  return out;
}

// Random log on the 4x4 grid: 1..maxEpochs epochs of 1..maxSteps steps.
inline RunLog random_grid_log(std::mt19937_64& rng, std::size_t maxEpochs, std::size_t maxSteps) {
  std::uniform_int_distribution<std::size_t> epochs(1, maxEpochs), steps(1, maxSteps);
  std::uniform_int_distribution<int> coord(0, 3), action(0, 3);
  RunLog log;
  const std::size_t e = epochs(rng);
  for (std::size_t i = 0; i < e; ++i) {
    EpochTrace t;
    t.epochIndex = i + 1;
    const std::size_t s = steps(rng);
    for (std::size_t k = 0; k < s; ++k) {
      t.steps.push_back({GridCell{coord(rng), coord(rng)},
                         DiscreteAction{static_cast<std::size_t>(action(rng))}, 0.0});
    }
    log.epochs.push_back(std::move(t));
  }
  return log;
}

}  // namespace brute
