#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adexp/estimation.hpp"

namespace adexp {

struct ConfidenceConfig {
  double delta = 0.1;     // global error tolerance, in (0, 1)
  double rho = 1.0;       // mixture constant, > 0
  int union_bound_k = 1;  // per-pair tolerance divisor; frozen at the
                          // initial arm count for a whole experiment

  double per_pair_delta() const { return delta / union_bound_k; }
};

// Always-valid radius for a gain-gap estimate at variance level v:
//   sqrt((v + rho) * ln((v + rho) / (rho * delta^2)))
// Nonnegative, nondecreasing in v, nonincreasing in delta. Throws on a
// negative variance.
double radius(double variance, const ConfidenceConfig& config,
              double per_pair_delta);

struct GapBound {
  int i = 0;
  int j = 0;
  double estimate = 0.0;
  double radius = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double variance = 0.0;  // the V-process level the radius was taken at
  int day = 0;
  bool frozen = false;
};

// Bounds for every ordered pair of active arms at the per-pair tolerance
// delta / union_bound_k. The (j, i) entry mirrors (i, j) with flipped sign.
std::vector<GapBound> gap_bounds(const EstimatorState& state,
                                 const ConfidenceConfig& config,
                                 std::span<const int> active_set);

// Single-pair bound, for callers that track pair freshness themselves.
GapBound pair_bound(const EstimatorState& state, const ConfidenceConfig& config,
                    int i, int j, bool frozen);

// Removes every arm some active competitor provably beats: j goes when an
// active i has estimate - radius > 0 against it. Survivors are never empty;
// the arm with the highest gain estimate cannot be eliminated.
std::vector<int> eliminate(std::span<const GapBound> bounds,
                           std::span<const int> active_set);

// The arm whose gap lower bound against every other active arm is positive,
// if one exists. A singleton active set identifies trivially. Ties (possible
// with discrete data) go to the lowest index; see identified_candidates.
std::optional<int> identified_best(std::span<const GapBound> bounds,
                                   std::span<const int> active_set);
std::vector<int> identified_candidates(std::span<const GapBound> bounds,
                                       std::span<const int> active_set);

struct LossGainSummary {
  double min_lower_rate = 0.0;  // maximum potential loss, as a rate
  double min_upper_rate = 0.0;  // maximum potential gain, as a rate
};

// Minimum lower and upper gap bounds of `arm` against the other active arms,
// normalized by total traffic. Requires arm active and at least two active
// arms.
LossGainSummary loss_gain_summary(const EstimatorState& state,
                                  const ConfidenceConfig& config,
                                  std::span<const int> active_set, int arm);

}  // namespace adexp
