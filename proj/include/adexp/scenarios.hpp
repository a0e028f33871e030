#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adexp/environment.hpp"

namespace adexp {

enum class ScenarioTag {
  kStationary,
  kFixedEffectShift,
  kTrend,
  kSimpsonsParadox,
  kReplicaOfflineExp1,
  kCustom,
};

// How a spec's means were generated. For the fixed-effect shift family the
// per-day shocks are retained so tests can verify the additive structure.
struct ScenarioKind {
  ScenarioTag tag = ScenarioTag::kCustom;
  std::optional<std::vector<double>> shift_series;
};

struct Scenario {
  std::string name;
  std::string description;
  ScenarioKind kind;
  EnvironmentSpec spec;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  int arm_count = 0;
  int default_horizon = 0;
  std::int64_t default_daily_traffic = 0;
};

// Named generators. Horizon and daily traffic may be overridden; passing
// nullopt keeps each scenario's default. Throws std::invalid_argument for an
// unknown name or invalid overrides.
Scenario make_scenario(const std::string& name, std::optional<int> horizon,
                       std::optional<std::vector<std::int64_t>> daily_traffic);

std::vector<ScenarioInfo> scenario_catalog();

// The scripted two-arm trace behind the simpsons scenario: allocation shifts
// onto the pooled-mean leader while means move, arm B wins every single day,
// and the pooled running means invert the ordering. Counts and rewards are
// deterministic, so the paradox structure is exact.
std::vector<DayObservation> simpsons_scripted_trace();

}  // namespace adexp
