#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adexp/environment.hpp"
#include "adexp/inference.hpp"
#include "adexp/policies.hpp"

namespace adexp {

// Days on which an arm's propensity falls below this floor are excluded from
// the diagnostic gain estimates and the pairwise monitor; inverse-propensity
// terms blow up below it. Exclusions are counted in the run summary.
constexpr double kPropensityFloor = 1e-4;

// Concrete history of one run: everything the policy saw and produced, day
// by day. Bounds cover all ordered arm pairs; pairs skipped on a day (an
// eliminated or starved arm) carry their last values with frozen set.
struct ExperimentTrace {
  PolicyTag policy = PolicyTag::kUniform;
  std::uint64_t master_seed = 0;
  int replication_id = 0;
  std::vector<DayObservation> days;
  std::vector<std::vector<int>> active_sets;      // after the day's update
  std::vector<std::vector<GapBound>> bounds;      // monitor view, per day
};

struct RunSummary {
  std::vector<double> regret_by_day;
  std::optional<int> stop_day;
  std::optional<int> identified_arm;
  std::optional<bool> correct;                // vs the time-independent optimum
  std::optional<bool> best_arm_eliminated;    // elimination policies only
  double total_reward = 0.0;
  int replication_id = 0;
  std::uint64_t seed = 0;
  int monitor_excluded_days = 0;   // (arm, day) pairs under the floor
  int monitor_tie_days = 0;        // days with several identification candidates
};

struct RunFlags {
  bool continue_after_stop = false;
};

// Runs one experiment: allocate, sample, update, monitor, repeat until the
// policy stops, the always-valid monitor identifies a best arm, or the
// horizon ends. Fully determined by (spec, policy, config, seed,
// replication).
std::pair<ExperimentTrace, RunSummary> run_experiment(
    const EnvironmentSpec& spec, const PolicyKind& policy,
    const ConfidenceConfig& config, std::uint64_t master_seed,
    int replication_id, const RunFlags& flags = {},
    std::optional<int> oracle_best_arm = std::nullopt);

// Counterfactual regret through each traced day: the best arm's oracle
// cumulative gain minus the expected reward of the realized allocation
// (true means, realized impression counts).
std::vector<double> regret_curve(const ExperimentTrace& trace,
                                 const EnvironmentSpec& spec);

struct MonteCarloReport {
  std::vector<double> mean_regret_curve;            // horizon-long; runs that
                                                    // stopped early carry
                                                    // their final value
  std::vector<double> identification_probability;   // of the optimal arm, by day
  double mean_regret_at_stop = 0.0;   // final-day regret for non-stopping runs
  double correctness_rate = 0.0;      // correct / identified
  double identified_fraction = 0.0;
  double best_eliminated_fraction = 0.0;
  std::optional<int> oracle_best_arm;
  std::vector<RunSummary> runs;
};

// Thread-safe sink invoked once per finished replication (possibly from
// worker threads) before aggregation.
using RunSink = std::function<void(const ExperimentTrace&, const RunSummary&)>;

// Independent replications with per-replication RNG streams. Results are
// identical for any thread count; threads == 0 uses the hardware count.
MonteCarloReport run_monte_carlo(const EnvironmentSpec& spec,
                                 const PolicyKind& policy,
                                 const ConfidenceConfig& config,
                                 int replications, std::uint64_t master_seed,
                                 const RunFlags& flags = {}, int threads = 1,
                                 const RunSink& sink = nullptr);

struct ParadoxReport {
  std::vector<int> daily_winner_counts;   // strict daily empirical-mean wins
  std::optional<int> everyday_winner;     // arm that won every single day
  std::optional<int> pooled_winner;       // running empirical mean leader
  std::optional<int> cg_winner;           // IPW cumulative gain leader
  bool paradox_present = false;
};

// Detects the pooled-vs-daily inversion in a trace: present when one arm has
// the strictly highest daily empirical mean on every day yet another arm
// leads the pooled running mean. Requires >= 2 arms and >= 2 days.
ParadoxReport simpsons_paradox_check(const std::vector<DayObservation>& days);
ParadoxReport simpsons_paradox_check(const ExperimentTrace& trace);

}  // namespace adexp
