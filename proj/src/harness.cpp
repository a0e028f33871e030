#include "adexp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace adexp {

namespace {

std::vector<int> all_arms(int k) {
  std::vector<int> arms(k);
  for (int i = 0; i < k; ++i) arms[i] = i;
  return arms;
}

std::optional<int> resolve_oracle_best(const EnvironmentSpec& spec,
                                       std::optional<int> oracle_best_arm) {
  if (oracle_best_arm.has_value()) return oracle_best_arm;
  const AssumptionReport report = verify_assumptions(spec);
  if (report.best_arm.has_value()) return report.best_arm;
  // No time-independent optimum; fall back to the final-day gain leader so
  // curves and correctness flags still have a reference.
  int best = 0;
  double best_gain = oracle_cumulative_gain(spec, 0, spec.horizon());
  for (int i = 1; i < spec.arm_count(); ++i) {
    const double g = oracle_cumulative_gain(spec, i, spec.horizon());
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::pair<ExperimentTrace, RunSummary> run_experiment(
    const EnvironmentSpec& spec, const PolicyKind& policy,
    const ConfidenceConfig& config, std::uint64_t master_seed,
    int replication_id, const RunFlags& flags,
    std::optional<int> oracle_best_arm) {
  const int k = spec.arm_count();
  const std::optional<int> oracle_best =
      resolve_oracle_best(spec, oracle_best_arm);
  const std::vector<int> full_set = all_arms(k);

  ExperimentTrace trace;
  trace.policy = policy.tag;
  trace.master_seed = master_seed;
  trace.replication_id = replication_id;

  RunSummary summary;
  summary.replication_id = replication_id;
  summary.seed = master_seed;

  PolicyState state = make_policy_state(policy, k);
  EstimatorState monitor(k);
  const bool self_stopping = policy.tag == PolicyTag::kCgse;

  for (int day = 1; day <= spec.horizon(); ++day) {
    const std::vector<double> propensities = allocate(
        policy, state,
        Rng::keyed(master_seed, replication_id, day, Rng::kPolicy));
    const DayObservation obs = sample_day(
        spec, day, propensities,
        Rng::keyed(master_seed, replication_id, day, Rng::kEnvironment));

    state = observe(policy, state, obs, config);

    // The monitor folds in arms whose propensity cleared the floor; pairs
    // with a starved or eliminated member stay frozen for the day.
    std::vector<int> monitored;
    monitored.reserve(k);
    for (int i = 0; i < k; ++i) {
      if (propensities[i] >= kPropensityFloor) monitored.push_back(i);
    }
    for (int i : state.active.empty() ? full_set : state.active) {
      if (propensities[i] < kPropensityFloor) summary.monitor_excluded_days++;
    }
    monitor.update(obs, monitored);

    std::vector<GapBound> day_bounds;
    day_bounds.reserve(static_cast<std::size_t>(k) * (k - 1));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        const bool fresh =
            std::find(monitored.begin(), monitored.end(), i) !=
                monitored.end() &&
            std::find(monitored.begin(), monitored.end(), j) !=
                monitored.end();
        day_bounds.push_back(pair_bound(monitor, config, i, j, !fresh));
      }
    }

    for (std::int64_t r : obs.rewards) {
      summary.total_reward += static_cast<double>(r);
    }
    trace.days.push_back(obs);
    trace.active_sets.push_back(state.active.empty() ? full_set
                                                     : state.active);
    trace.bounds.push_back(day_bounds);

    if (!summary.stop_day.has_value()) {
      if (self_stopping) {
        if (const std::optional<int> winner = stopped(policy, state)) {
          summary.stop_day = day;
          summary.identified_arm = winner;
        }
      } else {
        const std::vector<int> candidates =
            identified_candidates(day_bounds, full_set);
        if (candidates.size() > 1) summary.monitor_tie_days++;
        if (!candidates.empty()) {
          summary.stop_day = day;
          summary.identified_arm =
              *std::min_element(candidates.begin(), candidates.end());
        }
      }
    }
    if (policy.tag == PolicyTag::kCgse && oracle_best.has_value()) {
      const bool present =
          std::find(state.active.begin(), state.active.end(), *oracle_best) !=
          state.active.end();
      summary.best_arm_eliminated = !present;
    }
    if (summary.stop_day.has_value() && !flags.continue_after_stop) break;
  }

  if (summary.identified_arm.has_value() && oracle_best.has_value()) {
    summary.correct = summary.identified_arm == oracle_best;
  }
  summary.regret_by_day = regret_curve(trace, spec);
  return {std::move(trace), std::move(summary)};
}

std::vector<double> regret_curve(const ExperimentTrace& trace,
                                 const EnvironmentSpec& spec) {
  if (static_cast<int>(trace.days.size()) > spec.horizon()) {
    throw std::invalid_argument("trace longer than the environment horizon");
  }
  const int k = spec.arm_count();
  std::vector<double> curve;
  curve.reserve(trace.days.size());
  std::vector<double> gains(k, 0.0);
  double realized = 0.0;
  for (const DayObservation& obs : trace.days) {
    for (int i = 0; i < k; ++i) {
      gains[i] += static_cast<double>(spec.traffic(obs.day)) *
                  spec.mean(i, obs.day);
      realized += static_cast<double>(obs.impressions[i]) *
                  spec.mean(i, obs.day);
    }
    curve.push_back(*std::max_element(gains.begin(), gains.end()) - realized);
  }
  return curve;
}

MonteCarloReport run_monte_carlo(const EnvironmentSpec& spec,
                                 const PolicyKind& policy,
                                 const ConfidenceConfig& config,
                                 int replications, std::uint64_t master_seed,
                                 const RunFlags& flags, int threads,
                                 const RunSink& sink) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  const std::optional<int> oracle_best = resolve_oracle_best(spec, std::nullopt);

  MonteCarloReport report;
  report.oracle_best_arm = oracle_best;
  report.runs.resize(replications);

  int worker_count = threads;
  if (worker_count <= 0) {
    worker_count = static_cast<int>(std::thread::hardware_concurrency());
    if (worker_count <= 0) worker_count = 1;
  }
  worker_count = std::min(worker_count, replications);

  std::atomic<int> next_rep{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= replications) return;
      auto [trace, summary] = run_experiment(spec, policy, config, master_seed,
                                             rep, flags, oracle_best);
      if (sink) sink(trace, summary);
      report.runs[rep] = std::move(summary);
    }
  };
  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Aggregate in replication order so the report is byte-identical for any
  // thread count.
  const int horizon = spec.horizon();
  report.mean_regret_curve.assign(horizon, 0.0);
  report.identification_probability.assign(horizon, 0.0);
  int identified = 0;
  int correct = 0;
  int best_eliminated = 0;
  double regret_at_stop_sum = 0.0;
  for (const RunSummary& run : report.runs) {
    for (int d = 0; d < horizon; ++d) {
      const double value =
          d < static_cast<int>(run.regret_by_day.size())
              ? run.regret_by_day[d]
              : run.regret_by_day.back();
      report.mean_regret_curve[d] += value;
    }
    if (run.stop_day.has_value() && run.correct == true) {
      for (int d = *run.stop_day - 1; d < horizon; ++d) {
        report.identification_probability[d] += 1.0;
      }
    }
    if (run.stop_day.has_value()) identified++;
    if (run.correct == true) correct++;
    if (run.best_arm_eliminated == true) best_eliminated++;
    regret_at_stop_sum += run.stop_day.has_value()
                              ? run.regret_by_day[*run.stop_day - 1]
                              : run.regret_by_day.back();
  }
  const double n = static_cast<double>(replications);
  for (double& x : report.mean_regret_curve) x /= n;
  for (double& x : report.identification_probability) x /= n;
  report.mean_regret_at_stop = regret_at_stop_sum / n;
  report.identified_fraction = static_cast<double>(identified) / n;
  report.correctness_rate =
      identified > 0 ? static_cast<double>(correct) / identified : 0.0;
  report.best_eliminated_fraction = static_cast<double>(best_eliminated) / n;
  return report;
}

ParadoxReport simpsons_paradox_check(const std::vector<DayObservation>& days) {
  if (days.size() < 2) {
    throw std::invalid_argument("need at least two days");
  }
  const int k = static_cast<int>(days.front().impressions.size());
  if (k < 2) throw std::invalid_argument("need at least two arms");

  ParadoxReport report;
  report.daily_winner_counts.assign(k, 0);
  std::vector<double> pooled_rewards(k, 0.0);
  std::vector<double> pooled_impressions(k, 0.0);
  std::vector<double> ipw(k, 0.0);

  for (const DayObservation& obs : days) {
    int winner = -1;
    double best = -1.0;
    bool tie = false;
    for (int i = 0; i < k; ++i) {
      pooled_rewards[i] += static_cast<double>(obs.rewards[i]);
      pooled_impressions[i] += static_cast<double>(obs.impressions[i]);
      if (obs.propensities[i] > 0.0) {
        ipw[i] += static_cast<double>(obs.rewards[i]) / obs.propensities[i];
      }
      if (obs.impressions[i] > 0) {
        const double mu = static_cast<double>(obs.rewards[i]) /
                          static_cast<double>(obs.impressions[i]);
        if (mu > best) {
          best = mu;
          winner = i;
          tie = false;
        } else if (mu == best) {
          tie = true;
        }
      }
    }
    if (winner >= 0 && !tie) report.daily_winner_counts[winner]++;
  }

  for (int i = 0; i < k; ++i) {
    if (report.daily_winner_counts[i] == static_cast<int>(days.size())) {
      report.everyday_winner = i;
      break;
    }
  }
  double best_pooled = -1.0;
  double best_ipw = -1.0;
  for (int i = 0; i < k; ++i) {
    if (pooled_impressions[i] > 0.0 &&
        pooled_rewards[i] / pooled_impressions[i] > best_pooled) {
      best_pooled = pooled_rewards[i] / pooled_impressions[i];
      report.pooled_winner = i;
    }
    if (ipw[i] > best_ipw) {
      best_ipw = ipw[i];
      report.cg_winner = i;
    }
  }
  report.paradox_present = report.everyday_winner.has_value() &&
                           report.pooled_winner.has_value() &&
                           report.everyday_winner != report.pooled_winner;
  return report;
}

ParadoxReport simpsons_paradox_check(const ExperimentTrace& trace) {
  return simpsons_paradox_check(trace.days);
}

}  // namespace adexp
