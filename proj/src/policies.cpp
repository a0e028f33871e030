#include "adexp/policies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace adexp {

namespace {

constexpr double kAlphaClamp = 1e-6;

std::vector<double> renormalized(std::vector<double> p) {
  double sum = 0.0;
  for (double x : p) sum += x;
  if (!(sum > 0.0)) throw std::logic_error("degenerate propensity vector");
  for (double& x : p) x /= sum;
  return p;
}

std::vector<int> gain_ranks(const EstimatorState& est) {
  const int k = est.arm_count();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return est.cumulative_gain_estimate(a) > est.cumulative_gain_estimate(b);
  });
  std::vector<int> ranks(k);
  for (int r = 0; r < k; ++r) ranks[order[r]] = r + 1;
  return ranks;
}

}  // namespace

std::string policy_name(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::kCgse: return "cgse";
    case PolicyTag::kTs: return "ts";
    case PolicyTag::kTtts: return "ttts";
    case PolicyTag::kUniform: return "uniform";
    case PolicyTag::kBob: return "bob";
  }
  return "?";
}

std::optional<PolicyTag> policy_from_name(const std::string& name) {
  if (name == "cgse") return PolicyTag::kCgse;
  if (name == "ts") return PolicyTag::kTs;
  if (name == "ttts") return PolicyTag::kTtts;
  if (name == "uniform") return PolicyTag::kUniform;
  if (name == "bob") return PolicyTag::kBob;
  return std::nullopt;
}

PolicyState make_policy_state(const PolicyKind& kind, int arm_count) {
  if (arm_count < 1) throw std::invalid_argument("need at least one arm");
  PolicyState state;
  state.tag = kind.tag;
  switch (kind.tag) {
    case PolicyTag::kTs:
    case PolicyTag::kTtts:
      state.posterior_a.assign(arm_count, 1.0);
      state.posterior_b.assign(arm_count, 1.0);
      break;
    case PolicyTag::kCgse:
      state.estimator = EstimatorState(arm_count);
      state.active.resize(arm_count);
      std::iota(state.active.begin(), state.active.end(), 0);
      break;
    case PolicyTag::kBob:
      state.estimator = EstimatorState(arm_count);
      state.active.resize(arm_count);
      std::iota(state.active.begin(), state.active.end(), 0);
      state.ranks = gain_ranks(state.estimator);
      break;
    case PolicyTag::kUniform:
      state.active.resize(arm_count);
      std::iota(state.active.begin(), state.active.end(), 0);
      break;
  }
  return state;
}

std::vector<double> posterior_best_probabilities(
    std::span<const double> posterior_a, std::span<const double> posterior_b,
    int samples, Rng& rng) {
  const std::size_t k = posterior_a.size();
  if (k != posterior_b.size() || k == 0) {
    throw std::invalid_argument("posterior parameter size mismatch");
  }
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<std::int64_t> wins(k, 0);
  std::vector<int> ties;
  for (int s = 0; s < samples; ++s) {
    double best = -1.0;
    ties.clear();
    for (std::size_t i = 0; i < k; ++i) {
      const double draw = rng.next_beta(posterior_a[i], posterior_b[i]);
      if (draw > best) {
        best = draw;
        ties.assign(1, static_cast<int>(i));
      } else if (draw == best) {
        ties.push_back(static_cast<int>(i));
      }
    }
    const int winner =
        ties.size() == 1
            ? ties[0]
            : ties[static_cast<std::size_t>(rng.next_double() * ties.size()) %
                   ties.size()];
    wins[winner] += 1;
  }
  std::vector<double> alpha(k);
  for (std::size_t i = 0; i < k; ++i) {
    alpha[i] = static_cast<double>(wins[i]) / samples;
  }
  return alpha;
}

std::vector<double> ttts_allocation(std::span<const double> alpha,
                                    double beta) {
  const std::size_t k = alpha.size();
  if (k == 0) throw std::invalid_argument("empty alpha vector");
  if (k == 1) return {1.0};
  std::vector<double> clamped(alpha.begin(), alpha.end());
  for (double& a : clamped) a = std::clamp(a, kAlphaClamp, 1.0 - kAlphaClamp);
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) {
    double odds_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) odds_sum += clamped[j] / (1.0 - clamped[j]);
    }
    p[i] = clamped[i] * (beta + (1.0 - beta) * odds_sum);
  }
  return renormalized(std::move(p));
}

std::vector<double> allocate(const PolicyKind& kind, const PolicyState& state,
                             Rng rng) {
  switch (kind.tag) {
    case PolicyTag::kUniform: {
      const auto k = state.active.size();
      return std::vector<double>(k, 1.0 / static_cast<double>(k));
    }
    case PolicyTag::kCgse: {
      if (state.active.empty()) throw std::logic_error("empty active set");
      const int k = state.estimator.arm_count();
      std::vector<double> p(k, 0.0);
      const double share = 1.0 / static_cast<double>(state.active.size());
      for (int arm : state.active) p[arm] = share;
      return p;
    }
    case PolicyTag::kTs: {
      return renormalized(posterior_best_probabilities(
          state.posterior_a, state.posterior_b, kind.ts_posterior_samples,
          rng));
    }
    case PolicyTag::kTtts: {
      const std::vector<double> alpha = posterior_best_probabilities(
          state.posterior_a, state.posterior_b, kind.ts_posterior_samples,
          rng);
      return ttts_allocation(alpha, kind.ttts_beta);
    }
    case PolicyTag::kBob: {
      const int k = state.estimator.arm_count();
      double harmonic = 0.0;
      for (int r = 1; r <= k; ++r) harmonic += 1.0 / r;
      std::vector<double> p(k);
      for (int i = 0; i < k; ++i) p[i] = 1.0 / (state.ranks[i] * harmonic);
      return renormalized(std::move(p));
    }
  }
  throw std::logic_error("unknown policy tag");
}

PolicyState observe(const PolicyKind& kind, PolicyState state,
                    const DayObservation& obs,
                    const ConfidenceConfig& config) {
  switch (kind.tag) {
    case PolicyTag::kTs:
    case PolicyTag::kTtts: {
      if (obs.rewards.size() != state.posterior_a.size()) {
        throw std::invalid_argument("observation arm count mismatch");
      }
      for (std::size_t i = 0; i < state.posterior_a.size(); ++i) {
        state.posterior_a[i] += static_cast<double>(obs.rewards[i]);
        state.posterior_b[i] +=
            static_cast<double>(obs.impressions[i] - obs.rewards[i]);
      }
      break;
    }
    case PolicyTag::kCgse: {
      state.estimator.update(obs, state.active);
      ConfidenceConfig effective = config;
      if (kind.cgse_delta.has_value()) effective.delta = *kind.cgse_delta;
      const std::vector<GapBound> bounds =
          gap_bounds(state.estimator, effective, state.active);
      state.active = eliminate(bounds, state.active);
      break;
    }
    case PolicyTag::kBob: {
      state.estimator.update(obs, state.active);
      state.ranks = gain_ranks(state.estimator);
      break;
    }
    case PolicyTag::kUniform:
      if (obs.rewards.size() != state.active.size()) {
        throw std::invalid_argument("observation arm count mismatch");
      }
      break;
  }
  state.day += 1;
  return state;
}

std::optional<int> stopped(const PolicyKind& kind, const PolicyState& state) {
  if (kind.tag == PolicyTag::kCgse && state.active.size() == 1) {
    return state.active[0];
  }
  return std::nullopt;
}

}  // namespace adexp
