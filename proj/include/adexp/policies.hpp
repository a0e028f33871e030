#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adexp/inference.hpp"
#include "adexp/rng.hpp"

namespace adexp {

enum class PolicyTag { kCgse, kTs, kTtts, kUniform, kBob };

std::string policy_name(PolicyTag tag);
std::optional<PolicyTag> policy_from_name(const std::string& name);

struct PolicyKind {
  PolicyTag tag = PolicyTag::kCgse;
  int ts_posterior_samples = 10000;   // joint draws for best-arm probability
  double ttts_beta = 0.5;             // top-two mixing weight
  std::optional<double> cgse_delta;   // overrides the global delta if set
};

// Per-run policy memory. Thompson variants keep Beta(1, 1)-seeded posterior
// counts; the gain-based policies keep an EstimatorState. Owned exclusively
// by one experiment run.
struct PolicyState {
  PolicyTag tag = PolicyTag::kUniform;
  int day = 0;
  std::vector<double> posterior_a;  // successes + 1
  std::vector<double> posterior_b;  // failures + 1
  EstimatorState estimator{1};
  std::vector<int> active;          // elimination-based policies
  std::vector<int> ranks;           // 1-based rank per arm, gain-sorted
};

PolicyState make_policy_state(const PolicyKind& kind, int arm_count);

// Next-day propensities. Deterministic given the rng key; sums to 1 within
// 1e-9. Elimination assigns exactly 0 to inactive arms.
std::vector<double> allocate(const PolicyKind& kind, const PolicyState& state,
                             Rng rng);

// Folds a day of data collected under this policy's own propensities.
PolicyState observe(const PolicyKind& kind, PolicyState state,
                    const DayObservation& obs, const ConfidenceConfig& config);

// The surviving arm once elimination has narrowed the active set to one.
// Sampling-based baselines never self-stop; the harness monitors them with
// the always-valid bounds instead.
std::optional<int> stopped(const PolicyKind& kind, const PolicyState& state);

// Probability that each arm's posterior mean is the largest, estimated by
// counting argmax wins over joint posterior samples (ties split uniformly at
// random).
std::vector<double> posterior_best_probabilities(
    std::span<const double> posterior_a, std::span<const double> posterior_b,
    int samples, Rng& rng);

// Top-two reweighting of best-arm probabilities:
//   p_i = alpha_i * (beta + (1 - beta) * sum_{j != i} alpha_j / (1 - alpha_j))
// Alphas are clamped away from 1 before the odds transform, and the result
// is renormalized.
std::vector<double> ttts_allocation(std::span<const double> alpha,
                                    double beta);

}  // namespace adexp
