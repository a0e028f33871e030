#include "adexp/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adexp {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

std::vector<std::int64_t> resolve_traffic(
    std::optional<std::vector<std::int64_t>> traffic_override,
    std::int64_t default_traffic, int horizon) {
  if (!traffic_override.has_value()) {
    return std::vector<std::int64_t>(horizon, default_traffic);
  }
  std::vector<std::int64_t>& traffic = *traffic_override;
  if (traffic.size() == 1) {
    return std::vector<std::int64_t>(horizon, traffic[0]);
  }
  if (static_cast<int>(traffic.size()) != horizon) {
    throw std::invalid_argument(
        "daily_traffic has " + std::to_string(traffic.size()) +
        " entries but the horizon is " + std::to_string(horizon));
  }
  return std::move(traffic);
}

std::vector<std::vector<double>> means_from(
    const std::vector<double>& base, int horizon,
    double (*wobble)(int arm, int day)) {
  std::vector<std::vector<double>> means(base.size(),
                                         std::vector<double>(horizon));
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (int t = 1; t <= horizon; ++t) {
      means[i][t - 1] = base[i] + wobble(static_cast<int>(i), t);
    }
  }
  return means;
}

// Qualitative stand-in for the logged experiment: six low-rate arms under a
// deep three-week cycle plus a slow drift, a runner-up whose deficit widens
// over time, and short weekly wobbles. Arm index 4 is strictly best on every
// day.
double replica_mean(int arm, int day) {
  static constexpr double kBest = 0.22;
  static constexpr double kWeakGap[6] = {0.0, 0.030, 0.036, 0.042, 0.0, 0.048};
  const double season =
      0.06 * std::sin(kTau * day / 21.0 - 0.30 * std::numbers::pi) +
      0.02 * std::sin(kTau * day / 45.0);
  // The runner-up shares the best arm's weekly phase so its deficit follows
  // the widening schedule exactly.
  const double phase = 0.9 * (arm == 0 ? 4 : arm);
  const double wiggle = 0.008 * std::sin(kTau * day / 7.0 + phase);
  double base = kBest - kWeakGap[arm];
  if (arm == 0) base = kBest - (0.004 + 0.0009 * day);
  return base + season + wiggle;
}

}  // namespace

Scenario make_scenario(
    const std::string& name, std::optional<int> horizon,
    std::optional<std::vector<std::int64_t>> daily_traffic) {
  Scenario s;
  s.name = name;
  if (horizon.has_value() && *horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }

  if (name == "stationary2") {
    const int T = horizon.value_or(50);
    s.description = "two stationary arms, means 0.3 and 0.5";
    s.kind.tag = ScenarioTag::kStationary;
    s.spec = EnvironmentSpec::create(
        {std::vector<double>(T, 0.3), std::vector<double>(T, 0.5)},
        resolve_traffic(std::move(daily_traffic), 1000, T));
  } else if (name == "stationary4") {
    const int T = horizon.value_or(50);
    s.description = "four stationary arms, means 0.5/0.45/0.4/0.35";
    s.kind.tag = ScenarioTag::kStationary;
    s.spec = EnvironmentSpec::create(
        {std::vector<double>(T, 0.5), std::vector<double>(T, 0.45),
         std::vector<double>(T, 0.4), std::vector<double>(T, 0.35)},
        resolve_traffic(std::move(daily_traffic), 10000, T));
  } else if (name == "fixed_effect_shift") {
    const int T = horizon.value_or(30);
    s.description =
        "two arms with constant individual effects plus a shared sinusoidal "
        "daily shock";
    s.kind.tag = ScenarioTag::kFixedEffectShift;
    std::vector<double> shift(T);
    std::vector<std::vector<double>> means(2, std::vector<double>(T));
    for (int t = 1; t <= T; ++t) {
      shift[t - 1] = 0.2 * std::sin(kTau * t / 7.0);
      means[0][t - 1] = 0.55 + shift[t - 1];
      means[1][t - 1] = 0.45 + shift[t - 1];
    }
    s.kind.shift_series = std::move(shift);
    s.spec = EnvironmentSpec::create(
        std::move(means), resolve_traffic(std::move(daily_traffic), 1000, T));
  } else if (name == "trend") {
    const int T = horizon.value_or(40);
    s.description = "two arms drifting upward in parallel, constant gap";
    s.kind.tag = ScenarioTag::kTrend;
    s.spec = EnvironmentSpec::create(
        means_from({0.5, 0.35}, T,
                   [](int, int day) { return 0.004 * day; }),
        resolve_traffic(std::move(daily_traffic), 1000, T));
  } else if (name == "simpsons") {
    const int T = horizon.value_or(14);
    s.description =
        "two arms whose means rise while the allocation shifts onto arm A; "
        "arm B wins every day yet loses the pooled running mean";
    s.kind.tag = ScenarioTag::kSimpsonsParadox;
    std::vector<std::vector<double>> means(2, std::vector<double>(T));
    for (int t = 1; t <= T; ++t) {
      means[0][t - 1] = t <= T / 2 ? 0.15 : 0.55;
      means[1][t - 1] = t <= T / 2 ? 0.30 : 0.70;
    }
    s.spec = EnvironmentSpec::create(
        std::move(means), resolve_traffic(std::move(daily_traffic), 1000, T));
  } else if (name == "assumption_violation") {
    const int T = horizon.value_or(40);
    s.description =
        "two arms whose cumulative gain ordering flips mid-experiment, so no "
        "time-independent optimum exists";
    s.kind.tag = ScenarioTag::kCustom;
    std::vector<std::vector<double>> means(2, std::vector<double>(T));
    for (int t = 1; t <= T; ++t) {
      means[0][t - 1] = t <= 10 ? 0.7 : 0.25;
      means[1][t - 1] = 0.45;
    }
    s.spec = EnvironmentSpec::create(
        std::move(means), resolve_traffic(std::move(daily_traffic), 1000, T));
  } else if (name == "replica_offline_exp1") {
    const int T = horizon.value_or(60);
    s.description =
        "six non-stationary arms with deep seasonal swings and a widening "
        "runner-up deficit; arm 5 has the highest mean every day";
    s.kind.tag = ScenarioTag::kReplicaOfflineExp1;
    s.spec = EnvironmentSpec::create(
        means_from({0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, T, replica_mean),
        resolve_traffic(std::move(daily_traffic), 10000, T));
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  return s;
}

std::vector<ScenarioInfo> scenario_catalog() {
  const char* names[] = {"stationary2",        "stationary4",
                         "fixed_effect_shift", "trend",
                         "simpsons",           "assumption_violation",
                         "replica_offline_exp1"};
  std::vector<ScenarioInfo> catalog;
  for (const char* name : names) {
    Scenario s = make_scenario(name, std::nullopt, std::nullopt);
    ScenarioInfo info;
    info.name = s.name;
    info.description = s.description;
    info.arm_count = s.spec.arm_count();
    info.default_horizon = s.spec.horizon();
    info.default_daily_traffic = s.spec.traffic(1);
    catalog.push_back(std::move(info));
  }
  return catalog;
}

std::vector<DayObservation> simpsons_scripted_trace() {
  const Scenario s = make_scenario("simpsons", std::nullopt, std::nullopt);
  const EnvironmentSpec& spec = s.spec;
  std::vector<DayObservation> trace;
  trace.reserve(spec.horizon());
  for (int t = 1; t <= spec.horizon(); ++t) {
    const double p_a = t <= spec.horizon() / 2 ? 0.5 : 0.9;
    DayObservation obs;
    obs.day = t;
    obs.propensities = {p_a, 1.0 - p_a};
    const auto n = static_cast<double>(spec.traffic(t));
    obs.impressions = {std::llround(n * p_a), std::llround(n * (1.0 - p_a))};
    obs.rewards = {std::llround(obs.impressions[0] * spec.mean(0, t)),
                   std::llround(obs.impressions[1] * spec.mean(1, t))};
    trace.push_back(std::move(obs));
  }
  return trace;
}

}  // namespace adexp
