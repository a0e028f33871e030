#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adexp/environment.hpp"

namespace adexp {

// Running statistics over a stream of DayObservations: per-arm reward and
// impression tallies, inverse-propensity-weighted cumulative gain sums, and
// the pairwise plug-in variance process that drives the confidence radii.
//
// Each update names the arms that are active for that day. Accumulators for
// inactive arms (and for pairs with an inactive member) stay frozen at their
// last values; data reported for inactive arms is ignored. A value type:
// copy freely, mutate only under exclusive ownership.
class EstimatorState {
 public:
  explicit EstimatorState(int arm_count);

  // Folds one day in. Requires obs.day == day() + 1 and a strictly positive
  // propensity for every active arm (zero propensity for an active arm is a
  // policy bug). Throws std::invalid_argument otherwise.
  void update(const DayObservation& obs, std::span<const int> active_set);

  int arm_count() const { return arm_count_; }
  int day() const { return day_; }
  std::int64_t total_traffic() const { return total_traffic_; }
  std::int64_t arm_impressions(int arm) const { return impressions_[arm]; }
  std::int64_t arm_rewards(int arm) const { return rewards_[arm]; }

  // Pooled rewards / pooled impressions. Throws if the arm was never shown.
  double running_empirical_mean(int arm) const;

  // IPW cumulative gain estimate and its rate (normalized by total traffic).
  double cumulative_gain_estimate(int arm) const { return ipw_sum_[arm]; }
  double cumulative_gain_rate(int arm) const;

  // Pairwise gain gap, accumulated day by day over the pair's common active
  // days. Exactly antisymmetric: gap_estimate(i, j) == -gap_estimate(j, i).
  double gap_estimate(int i, int j) const;

  // Plug-in variance process for the pair (symmetric).
  double pair_variance(int i, int j) const;

  // Rewards normalized by expected impressions (sum of traffic times
  // propensity over the arm's active days). Unbiased for the mean under a
  // predetermined schedule with constant daily traffic; kept only for
  // variance comparisons against the IPW estimator, not used for decisions.
  double expected_impression_mean(int arm) const;
  double expected_impressions(int arm) const { return expected_imp_[arm]; }

 private:
  int pair_index(int i, int j) const { return i * arm_count_ + j; }

  int arm_count_;
  int day_ = 0;
  std::int64_t total_traffic_ = 0;
  std::vector<std::int64_t> rewards_;
  std::vector<std::int64_t> impressions_;
  std::vector<double> ipw_sum_;
  std::vector<double> expected_imp_;
  std::vector<double> gap_sum_;   // upper triangle, negated for (j, i)
  std::vector<double> var_sum_;   // symmetric
};

// Minimal-variance day weights for estimating a constant mean difference
// from per-day empirical means under the fixed-effect shift model:
// w_t proportional to the harmonic pairing of the two arms' daily counts.
// Every count must be positive. Weights are nonnegative and sum to 1.
std::vector<double> vrcg_weights(std::span<const std::int64_t> impressions_i,
                                 std::span<const std::int64_t> impressions_j);

// Weighted sum of daily empirical-mean differences.
double vrcg_gap(std::span<const double> daily_means_i,
                std::span<const double> daily_means_j,
                std::span<const double> weights);

}  // namespace adexp
