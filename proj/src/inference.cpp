#include "adexp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adexp {

double radius(double variance, const ConfidenceConfig& config,
              double per_pair_delta) {
  if (variance < 0.0) throw std::invalid_argument("negative variance");
  if (!(per_pair_delta > 0.0 && per_pair_delta <= 1.0)) {
    throw std::invalid_argument("per-pair delta must lie in (0, 1]");
  }
  if (!(config.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const double v = variance + config.rho;
  const double log_term =
      std::log(v / (config.rho * per_pair_delta * per_pair_delta));
  // delta <= 1 makes the argument >= 1, but guard against rounding.
  return std::sqrt(v * std::max(log_term, 0.0));
}

GapBound pair_bound(const EstimatorState& state, const ConfidenceConfig& config,
                    int i, int j, bool frozen) {
  GapBound b;
  b.i = i;
  b.j = j;
  b.day = state.day();
  b.estimate = state.gap_estimate(i, j);
  b.variance = state.pair_variance(i, j);
  b.radius = radius(b.variance, config, config.per_pair_delta());
  b.lower = b.estimate - b.radius;
  b.upper = b.estimate + b.radius;
  b.frozen = frozen;
  return b;
}

std::vector<GapBound> gap_bounds(const EstimatorState& state,
                                 const ConfidenceConfig& config,
                                 std::span<const int> active_set) {
  if (state.day() < 1) {
    throw std::invalid_argument("no observations folded in yet");
  }
  std::vector<GapBound> bounds;
  bounds.reserve(active_set.size() * (active_set.size() - 1));
  for (int i : active_set) {
    for (int j : active_set) {
      if (i == j) continue;
      bounds.push_back(pair_bound(state, config, i, j, /*frozen=*/false));
    }
  }
  return bounds;
}

std::vector<int> eliminate(std::span<const GapBound> bounds,
                           std::span<const int> active_set) {
  std::vector<int> survivors;
  survivors.reserve(active_set.size());
  for (int j : active_set) {
    bool beaten = false;
    for (const GapBound& b : bounds) {
      if (b.j == j && b.lower > 0.0) {
        beaten = true;
        break;
      }
    }
    if (!beaten) survivors.push_back(j);
  }
  if (survivors.empty()) {
    // Unreachable: the arm with the maximal gain estimate has a nonpositive
    // gap estimate against it from every competitor, and radii are positive.
    throw std::logic_error("elimination removed every arm");
  }
  return survivors;
}

std::vector<int> identified_candidates(std::span<const GapBound> bounds,
                                       std::span<const int> active_set) {
  if (active_set.size() == 1) return {active_set[0]};
  std::vector<int> candidates;
  for (int i : active_set) {
    bool beats_all = true;
    for (int j : active_set) {
      if (i == j) continue;
      bool found = false;
      for (const GapBound& b : bounds) {
        if (b.i == i && b.j == j) {
          found = true;
          if (!(b.lower > 0.0)) beats_all = false;
          break;
        }
      }
      if (!found) beats_all = false;
      if (!beats_all) break;
    }
    if (beats_all) candidates.push_back(i);
  }
  return candidates;
}

std::optional<int> identified_best(std::span<const GapBound> bounds,
                                   std::span<const int> active_set) {
  std::vector<int> candidates = identified_candidates(bounds, active_set);
  if (candidates.empty()) return std::nullopt;
  return *std::min_element(candidates.begin(), candidates.end());
}

LossGainSummary loss_gain_summary(const EstimatorState& state,
                                  const ConfidenceConfig& config,
                                  std::span<const int> active_set, int arm) {
  if (active_set.size() < 2) {
    throw std::invalid_argument("need at least two active arms");
  }
  if (std::find(active_set.begin(), active_set.end(), arm) ==
      active_set.end()) {
    throw std::invalid_argument("arm " + std::to_string(arm) +
                                " is not active");
  }
  if (state.total_traffic() <= 0) {
    throw std::invalid_argument("no traffic observed yet");
  }
  const double traffic = static_cast<double>(state.total_traffic());
  LossGainSummary summary;
  summary.min_lower_rate = std::numeric_limits<double>::infinity();
  summary.min_upper_rate = std::numeric_limits<double>::infinity();
  for (int j : active_set) {
    if (j == arm) continue;
    const GapBound b = pair_bound(state, config, arm, j, false);
    summary.min_lower_rate = std::min(summary.min_lower_rate, b.lower / traffic);
    summary.min_upper_rate = std::min(summary.min_upper_rate, b.upper / traffic);
  }
  return summary;
}

}  // namespace adexp
