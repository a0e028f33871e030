#include "adexp/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace adexp {

namespace {

void check_day(const EnvironmentSpec& spec, int day) {
  if (day < 1 || day > spec.horizon()) {
    throw std::out_of_range("day " + std::to_string(day) +
                            " outside [1, " + std::to_string(spec.horizon()) +
                            "]");
  }
}

void check_arm(const EnvironmentSpec& spec, int arm) {
  if (arm < 0 || arm >= spec.arm_count()) {
    throw std::out_of_range("arm index " + std::to_string(arm) +
                            " outside [0, " +
                            std::to_string(spec.arm_count()) + ")");
  }
}

}  // namespace

EnvironmentSpec EnvironmentSpec::create(
    std::vector<std::vector<double>> means,
    std::vector<std::int64_t> daily_traffic) {
  if (means.empty()) throw std::invalid_argument("need at least one arm");
  if (daily_traffic.empty()) throw std::invalid_argument("horizon must be >= 1");
  const std::size_t horizon = daily_traffic.size();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].size() != horizon) {
      throw std::invalid_argument("arm " + std::to_string(i) + " has " +
                                  std::to_string(means[i].size()) +
                                  " means, expected " +
                                  std::to_string(horizon));
    }
    for (std::size_t t = 0; t < horizon; ++t) {
      const double mu = means[i][t];
      if (!(mu >= kMeanFloor && mu <= 1.0 - kMeanFloor)) {
        throw std::invalid_argument(
            "mean for arm " + std::to_string(i) + ", day " +
            std::to_string(t + 1) + " is " + std::to_string(mu) +
            "; must lie in [1e-6, 1 - 1e-6]");
      }
    }
  }
  for (std::size_t t = 0; t < horizon; ++t) {
    if (daily_traffic[t] <= 0) {
      throw std::invalid_argument("daily traffic for day " +
                                  std::to_string(t + 1) +
                                  " must be positive");
    }
  }
  EnvironmentSpec spec;
  spec.means_ = std::move(means);
  spec.traffic_ = std::move(daily_traffic);
  return spec;
}

std::int64_t EnvironmentSpec::total_traffic(int through_day) const {
  std::int64_t total = 0;
  for (int t = 1; t <= through_day; ++t) total += traffic_[t - 1];
  return total;
}

std::int64_t DayObservation::total_impressions() const {
  std::int64_t total = 0;
  for (std::int64_t n : impressions) total += n;
  return total;
}

DayObservation sample_day(const EnvironmentSpec& spec, int day,
                          std::span<const double> propensities, Rng rng) {
  check_day(spec, day);
  if (static_cast<int>(propensities.size()) != spec.arm_count()) {
    throw std::invalid_argument("propensity vector has wrong arm count");
  }
  double sum = 0.0;
  for (double p : propensities) {
    if (p < 0.0) throw std::invalid_argument("negative propensity");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("propensities sum to " + std::to_string(sum) +
                                ", expected 1");
  }

  DayObservation obs;
  obs.day = day;
  obs.propensities.assign(propensities.begin(), propensities.end());
  obs.impressions = rng.next_multinomial(spec.traffic(day), propensities);
  obs.rewards.resize(spec.arm_count());
  for (int i = 0; i < spec.arm_count(); ++i) {
    obs.rewards[i] = rng.next_binomial(obs.impressions[i], spec.mean(i, day));
  }
  return obs;
}

double oracle_cumulative_gain(const EnvironmentSpec& spec, int arm,
                              int through_day) {
  check_arm(spec, arm);
  check_day(spec, through_day);
  double gain = 0.0;
  for (int t = 1; t <= through_day; ++t) {
    gain += static_cast<double>(spec.traffic(t)) * spec.mean(arm, t);
  }
  return gain;
}

double oracle_gap_rate(const EnvironmentSpec& spec, int ref_arm, int other_arm,
                       int through_day) {
  check_arm(spec, ref_arm);
  check_arm(spec, other_arm);
  check_day(spec, through_day);
  double gap = 0.0;
  for (int t = 1; t <= through_day; ++t) {
    gap += static_cast<double>(spec.traffic(t)) *
           (spec.mean(ref_arm, t) - spec.mean(other_arm, t));
  }
  return gap / static_cast<double>(spec.total_traffic(through_day));
}

AssumptionReport verify_assumptions(const EnvironmentSpec& spec) {
  AssumptionReport report;
  const int k = spec.arm_count();
  const int horizon = spec.horizon();

  // A candidate optimum must keep a nonnegative gap rate to every other arm
  // on every day. Lowest index wins if several qualify.
  int best = -1;
  for (int i = 0; i < k && best < 0; ++i) {
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      if (j == i) continue;
      for (int t = 1; t <= horizon; ++t) {
        if (oracle_gap_rate(spec, i, j, t) < 0.0) {
          ok = false;
          break;
        }
      }
    }
    if (ok) best = i;
  }
  if (best < 0) return report;

  report.best_arm = best;
  report.assumption1_holds = true;
  if (k == 1) {
    report.t0 = 0;
    report.epsilon = 0.5;
    return report;
  }

  // Minimum gap rate over competitors, per day.
  std::vector<double> min_gap(horizon + 1, 0.0);
  for (int t = 1; t <= horizon; ++t) {
    double m = 1.0;
    for (int j = 0; j < k; ++j) {
      if (j == best) continue;
      m = std::min(m, oracle_gap_rate(spec, best, j, t));
    }
    min_gap[t] = m;
  }

  // Largest grid level that persists through the final day; the onset day is
  // the last day the minimum gap dipped below that level.
  constexpr int kGridSize = 50;
  constexpr double kGridLo = 1e-5;
  constexpr double kGridHi = 0.5;
  double epsilon = -1.0;
  for (int m = kGridSize - 1; m >= 0; --m) {
    const double candidate =
        kGridLo * std::pow(kGridHi / kGridLo,
                           static_cast<double>(m) / (kGridSize - 1));
    if (min_gap[horizon] >= candidate) {
      epsilon = candidate;
      break;
    }
  }
  if (epsilon < 0.0) return report;  // assumption 2 fails within the horizon

  int t0 = 0;
  for (int t = horizon; t >= 1; --t) {
    if (min_gap[t] < epsilon) {
      t0 = t;
      break;
    }
  }
  report.t0 = t0;
  report.epsilon = epsilon;
  return report;
}

}  // namespace adexp
