#include "adexp/estimation.hpp"

#include <stdexcept>
#include <string>

namespace adexp {

namespace {

void check_arm(int arm, int arm_count) {
  if (arm < 0 || arm >= arm_count) {
    throw std::out_of_range("arm index " + std::to_string(arm) +
                            " outside [0, " + std::to_string(arm_count) + ")");
  }
}

}  // namespace

EstimatorState::EstimatorState(int arm_count)
    : arm_count_(arm_count),
      rewards_(arm_count, 0),
      impressions_(arm_count, 0),
      ipw_sum_(arm_count, 0.0),
      expected_imp_(arm_count, 0.0),
      gap_sum_(static_cast<std::size_t>(arm_count) * arm_count, 0.0),
      var_sum_(static_cast<std::size_t>(arm_count) * arm_count, 0.0) {
  if (arm_count < 1) throw std::invalid_argument("need at least one arm");
}

void EstimatorState::update(const DayObservation& obs,
                            std::span<const int> active_set) {
  if (obs.day != day_ + 1) {
    throw std::invalid_argument("observation for day " +
                                std::to_string(obs.day) + ", expected day " +
                                std::to_string(day_ + 1));
  }
  if (static_cast<int>(obs.propensities.size()) != arm_count_ ||
      static_cast<int>(obs.impressions.size()) != arm_count_ ||
      static_cast<int>(obs.rewards.size()) != arm_count_) {
    throw std::invalid_argument("observation arm count mismatch");
  }
  for (int arm : active_set) {
    check_arm(arm, arm_count_);
    if (obs.propensities[arm] <= 0.0) {
      throw std::invalid_argument("active arm " + std::to_string(arm) +
                                  " has zero propensity on day " +
                                  std::to_string(obs.day));
    }
  }

  const auto day_traffic = static_cast<double>(obs.total_impressions());
  total_traffic_ += obs.total_impressions();

  // Plug-in daily mean, falling back to the worst case 1/2 when an active
  // arm drew no impressions (possible at tiny daily traffic).
  std::vector<double> mu_hat(arm_count_, 0.5);
  for (int arm : active_set) {
    if (obs.impressions[arm] > 0) {
      mu_hat[arm] = static_cast<double>(obs.rewards[arm]) /
                    static_cast<double>(obs.impressions[arm]);
    }
    rewards_[arm] += obs.rewards[arm];
    impressions_[arm] += obs.impressions[arm];
    ipw_sum_[arm] +=
        static_cast<double>(obs.rewards[arm]) / obs.propensities[arm];
    expected_imp_[arm] += day_traffic * obs.propensities[arm];
  }

  for (std::size_t a = 0; a < active_set.size(); ++a) {
    const int i = active_set[a];
    const double ipw_i =
        static_cast<double>(obs.rewards[i]) / obs.propensities[i];
    const double var_i =
        mu_hat[i] * (1.0 - mu_hat[i]) / obs.propensities[i];
    for (std::size_t b = a + 1; b < active_set.size(); ++b) {
      const int j = active_set[b];
      const double ipw_j =
          static_cast<double>(obs.rewards[j]) / obs.propensities[j];
      const double var_j =
          mu_hat[j] * (1.0 - mu_hat[j]) / obs.propensities[j];
      const double v = day_traffic * (var_i + var_j);
      var_sum_[pair_index(i, j)] += v;
      var_sum_[pair_index(j, i)] += v;
      // One triangle holds the signed sum; the mirror entry is derived, so
      // antisymmetry is exact.
      if (i < j) {
        gap_sum_[pair_index(i, j)] += ipw_i - ipw_j;
      } else {
        gap_sum_[pair_index(j, i)] += ipw_j - ipw_i;
      }
    }
  }
  day_ += 1;
}

double EstimatorState::running_empirical_mean(int arm) const {
  check_arm(arm, arm_count_);
  if (impressions_[arm] <= 0) {
    throw std::invalid_argument("arm " + std::to_string(arm) +
                                " was never shown");
  }
  return static_cast<double>(rewards_[arm]) /
         static_cast<double>(impressions_[arm]);
}

double EstimatorState::cumulative_gain_rate(int arm) const {
  check_arm(arm, arm_count_);
  if (total_traffic_ <= 0) {
    throw std::invalid_argument("no traffic observed yet");
  }
  return ipw_sum_[arm] / static_cast<double>(total_traffic_);
}

double EstimatorState::gap_estimate(int i, int j) const {
  check_arm(i, arm_count_);
  check_arm(j, arm_count_);
  if (i == j) return 0.0;
  return i < j ? gap_sum_[pair_index(i, j)] : -gap_sum_[pair_index(j, i)];
}

double EstimatorState::pair_variance(int i, int j) const {
  check_arm(i, arm_count_);
  check_arm(j, arm_count_);
  if (i == j) return 0.0;
  return var_sum_[pair_index(i, j)];
}

double EstimatorState::expected_impression_mean(int arm) const {
  check_arm(arm, arm_count_);
  if (expected_imp_[arm] <= 0.0) {
    throw std::invalid_argument("arm " + std::to_string(arm) +
                                " has no expected impressions");
  }
  return static_cast<double>(rewards_[arm]) / expected_imp_[arm];
}

std::vector<double> vrcg_weights(std::span<const std::int64_t> impressions_i,
                                 std::span<const std::int64_t> impressions_j) {
  if (impressions_i.size() != impressions_j.size() || impressions_i.empty()) {
    throw std::invalid_argument("need matching nonempty daily count series");
  }
  std::vector<double> weights(impressions_i.size());
  double total = 0.0;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (impressions_i[t] <= 0 || impressions_j[t] <= 0) {
      throw std::invalid_argument("daily counts must be positive on day " +
                                  std::to_string(t + 1));
    }
    weights[t] = 1.0 / (1.0 / static_cast<double>(impressions_i[t]) +
                        1.0 / static_cast<double>(impressions_j[t]));
    total += weights[t];
  }
  for (double& w : weights) w /= total;
  return weights;
}

double vrcg_gap(std::span<const double> daily_means_i,
                std::span<const double> daily_means_j,
                std::span<const double> weights) {
  if (daily_means_i.size() != weights.size() ||
      daily_means_j.size() != weights.size()) {
    throw std::invalid_argument("mean and weight series length mismatch");
  }
  double gap = 0.0;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    gap += (daily_means_i[t] - daily_means_j[t]) * weights[t];
  }
  return gap;
}

}  // namespace adexp
