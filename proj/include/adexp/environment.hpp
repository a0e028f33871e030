#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adexp/rng.hpp"

namespace adexp {

// Arms are 0-based throughout the C++ API; days are 1-based and run over
// [1, horizon], matching the daily-batch framing of the experiment loop.
// Serialized outputs display arms 1-based (see report.hpp).

// Ground truth of a time-varying Bernoulli environment: one mean per
// (arm, day) plus the daily traffic volume.
class EnvironmentSpec {
 public:
  // Empty placeholder; assign from create() before use.
  EnvironmentSpec() = default;

  // means[arm][day-1] must lie in [kMeanFloor, 1 - kMeanFloor]; traffic must
  // be positive and have one entry per day. Throws std::invalid_argument.
  static EnvironmentSpec create(std::vector<std::vector<double>> means,
                                std::vector<std::int64_t> daily_traffic);

  int arm_count() const { return static_cast<int>(means_.size()); }
  int horizon() const { return static_cast<int>(traffic_.size()); }
  double mean(int arm, int day) const { return means_[arm][day - 1]; }
  std::int64_t traffic(int day) const { return traffic_[day - 1]; }
  std::int64_t total_traffic(int through_day) const;
  const std::vector<std::vector<double>>& means() const { return means_; }
  const std::vector<std::int64_t>& daily_traffic() const { return traffic_; }

  // Bernoulli means must stay away from the boundary or the plug-in
  // variance process degenerates.
  static constexpr double kMeanFloor = 1e-6;

 private:
  std::vector<std::vector<double>> means_;
  std::vector<std::int64_t> traffic_;
};

// One day's realized data: per-arm impression counts, reward totals, and the
// propensities the allocation used. Aggregates the per-visitor process.
struct DayObservation {
  int day = 0;
  std::vector<std::int64_t> impressions;
  std::vector<std::int64_t> rewards;
  std::vector<double> propensities;

  std::int64_t total_impressions() const;
};

// Draws one day of data: a multinomial split of the day's traffic over arms
// followed by a binomial reward draw per arm. Distributionally identical to
// assigning each visitor independently. Pure: the Rng is taken by value, so
// the same (spec, day, propensities, rng key) always yields the same bytes.
// Throws std::out_of_range for a bad day, std::invalid_argument for a
// malformed propensity vector (negative entry, or sum off by > 1e-12).
DayObservation sample_day(const EnvironmentSpec& spec, int day,
                          std::span<const double> propensities, Rng rng);

// G_{arm, through_day}: total expected reward had the arm received all
// traffic. Exact sum, no sampling.
double oracle_cumulative_gain(const EnvironmentSpec& spec, int arm,
                              int through_day);

// Cumulative gain rate gap of `other_arm` relative to `ref_arm` through the
// given day, normalized by total traffic. Positive when ref_arm leads.
double oracle_gap_rate(const EnvironmentSpec& spec, int ref_arm, int other_arm,
                       int through_day);

struct AssumptionReport {
  std::optional<int> best_arm;           // time-independent optimum, if any
  bool assumption1_holds = false;        // gap rates never negative
  std::optional<int> t0;                 // day after which the gap persists
  std::optional<double> epsilon;         // persistent gap level (grid value)
};

// Checks whether some arm's cumulative gain rate gap to every other arm is
// nonnegative on every day, and if so searches a fixed log-spaced grid of 50
// candidates in [1e-5, 0.5] for the largest persistent gap level and its
// onset day.
AssumptionReport verify_assumptions(const EnvironmentSpec& spec);

}  // namespace adexp
