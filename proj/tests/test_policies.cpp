#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adexp/policies.hpp"

using namespace adexp;

namespace {

DayObservation make_obs(int day, std::vector<std::int64_t> impressions,
                        std::vector<std::int64_t> rewards,
                        std::vector<double> propensities) {
  DayObservation obs;
  obs.day = day;
  obs.impressions = std::move(impressions);
  obs.rewards = std::move(rewards);
  obs.propensities = std::move(propensities);
  return obs;
}

double vector_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

ConfidenceConfig default_config(int k) {
  ConfidenceConfig c;
  c.union_bound_k = k;
  return c;
}

}  // namespace

TEST_CASE("uniform splits evenly") {
  PolicyKind kind;
  kind.tag = PolicyTag::kUniform;
  const PolicyState state = make_policy_state(kind, 4);
  const auto p = allocate(kind, state, Rng(1));
  REQUIRE(p.size() == 4);
  for (double x : p) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("ttts_allocation frozen values") {
  const std::vector<double> symmetric = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (double x : ttts_allocation(symmetric, 0.5)) {
    CHECK(x == doctest::Approx(1.0 / 3));
  }

  const std::vector<double> skewed = {0.9, 0.1};
  const auto two = ttts_allocation(skewed, 0.5);
  CHECK(two[0] == doctest::Approx(0.5));
  CHECK(two[1] == doctest::Approx(0.5));

  const std::vector<double> three = {0.5, 0.3, 0.2};
  const auto p = ttts_allocation(three, 0.5);
  CHECK(p[0] == doctest::Approx(0.41964285714285715));
  CHECK(p[1] == doctest::Approx(0.3375));
  CHECK(p[2] == doctest::Approx(0.24285714285714288));
  CHECK(vector_sum(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-arm ttts is a constant even split at beta one half") {
  Rng meta(3);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = meta.next_double();
    const auto p = ttts_allocation(std::vector<double>{a, 1.0 - a}, 0.5);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-9));
  }
  // alpha pinned to 1 must not divide by zero.
  const auto guarded = ttts_allocation(std::vector<double>{1.0, 0.0}, 0.5);
  CHECK(vector_sum(guarded) == doctest::Approx(1.0));
}

TEST_CASE("bob ranks arms by gain and allocates harmonically") {
  PolicyKind kind;
  kind.tag = PolicyTag::kBob;
  PolicyState state = make_policy_state(kind, 2);
  // No data: ranks fall back to index order, so arm 0 leads.
  auto p = allocate(kind, state, Rng(1));
  CHECK(p[0] == doctest::Approx(2.0 / 3));
  CHECK(p[1] == doctest::Approx(1.0 / 3));

  // Arm 1 pulls ahead on gains; ranks flip.
  state = observe(kind, std::move(state),
                  make_obs(1, {500, 500}, {100, 400}, {0.5, 0.5}),
                  default_config(2));
  p = allocate(kind, state, Rng(1));
  CHECK(p[0] == doctest::Approx(1.0 / 3));
  CHECK(p[1] == doctest::Approx(2.0 / 3));

  // And flip back after a strong reversal.
  state = observe(kind, std::move(state),
                  make_obs(2, {500, 500}, {500, 0}, {0.5, 0.5}),
                  default_config(2));
  p = allocate(kind, state, Rng(1));
  CHECK(p[0] == doctest::Approx(2.0 / 3));
  CHECK(p[1] == doctest::Approx(1.0 / 3));
}

TEST_CASE("bob propensities are a permutation of the harmonic profile") {
  PolicyKind kind;
  kind.tag = PolicyTag::kBob;
  PolicyState state = make_policy_state(kind, 5);
  Rng meta(11);
  double harmonic = 0.0;
  for (int r = 1; r <= 5; ++r) harmonic += 1.0 / r;
  for (int day = 1; day <= 6; ++day) {
    std::vector<std::int64_t> n(5, 100), r(5);
    for (auto& x : r) x = static_cast<std::int64_t>(meta.next_double() * 101);
    state = observe(kind, std::move(state),
                    make_obs(day, n, r, std::vector<double>(5, 0.2)),
                    default_config(5));
    auto p = allocate(kind, state, Rng(day));
    CHECK(vector_sum(p) == doctest::Approx(1.0).epsilon(1e-12));
    std::sort(p.begin(), p.end(), std::greater<>());
    for (int rank = 1; rank <= 5; ++rank) {
      CHECK(p[rank - 1] == doctest::Approx(1.0 / (rank * harmonic)));
    }
  }
}

TEST_CASE("thompson posterior updates are conjugate") {
  PolicyKind kind;
  kind.tag = PolicyTag::kTs;
  PolicyState state = make_policy_state(kind, 2);
  CHECK(state.posterior_a == std::vector<double>{1.0, 1.0});
  state = observe(kind, std::move(state),
                  make_obs(1, {10, 10}, {3, 7}, {0.5, 0.5}),
                  default_config(2));
  CHECK(state.posterior_a[0] == doctest::Approx(4.0));
  CHECK(state.posterior_b[0] == doctest::Approx(8.0));
  CHECK(state.posterior_a[1] == doctest::Approx(8.0));
  CHECK(state.posterior_b[1] == doctest::Approx(4.0));
  CHECK(stopped(kind, state) == std::nullopt);
}

TEST_CASE("posterior best probabilities track separated posteriors") {
  Rng rng(17);
  const std::vector<double> a = {100.0, 10.0};
  const std::vector<double> b = {10.0, 100.0};
  const auto alpha = posterior_best_probabilities(a, b, 4000, rng);
  CHECK(alpha[0] > 0.95);
  CHECK(alpha[0] + alpha[1] == doctest::Approx(1.0));

  const std::vector<double> flat_a = {1.0, 1.0, 1.0};
  const std::vector<double> flat_b = {1.0, 1.0, 1.0};
  const auto uniform_alpha =
      posterior_best_probabilities(flat_a, flat_b, 20000, rng);
  for (double x : uniform_alpha) {
    CHECK(x == doctest::Approx(1.0 / 3).epsilon(0.05));
  }
}

TEST_CASE("ts allocation equals the sampled best-arm probabilities") {
  PolicyKind kind;
  kind.tag = PolicyTag::kTs;
  kind.ts_posterior_samples = 20000;
  PolicyState state = make_policy_state(kind, 3);
  state = observe(kind, std::move(state),
                  make_obs(1, {300, 300, 300}, {200, 150, 100},
                           {1.0 / 3, 1.0 / 3, 1.0 / 3}),
                  default_config(3));
  const auto p = allocate(kind, state, Rng::keyed(5, 0, 2, Rng::kPolicy));
  CHECK(vector_sum(p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p[0] > 0.9);
  CHECK(p[2] < 0.02);
  // Same key, same draw.
  const auto again = allocate(kind, state, Rng::keyed(5, 0, 2, Rng::kPolicy));
  CHECK(p == again);
}

TEST_CASE("cgse allocates uniformly over survivors and stops at one") {
  PolicyKind kind;
  kind.tag = PolicyTag::kCgse;
  PolicyState state = make_policy_state(kind, 3);
  auto p = allocate(kind, state, Rng(1));
  for (double x : p) CHECK(x == doctest::Approx(1.0 / 3));
  CHECK(stopped(kind, state) == std::nullopt);

  // Overwhelming evidence against arms 1 and 2 on one day.
  state = observe(kind, std::move(state),
                  make_obs(1, {4000, 4000, 4000}, {3600, 400, 380},
                           {1.0 / 3, 1.0 / 3, 1.0 / 3}),
                  default_config(3));
  CHECK(state.active == std::vector<int>{0});
  CHECK(stopped(kind, state) == 0);
  p = allocate(kind, state, Rng(2));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.0);
}

TEST_CASE("cgse active sets shrink monotonically") {
  const int horizon = 10;
  const EnvironmentSpec spec = EnvironmentSpec::create(
      {std::vector<double>(horizon, 0.55), std::vector<double>(horizon, 0.45),
       std::vector<double>(horizon, 0.35)},
      std::vector<std::int64_t>(horizon, 2000));
  PolicyKind kind;
  kind.tag = PolicyTag::kCgse;
  for (int rep = 0; rep < 20; ++rep) {
    PolicyState state = make_policy_state(kind, 3);
    std::vector<int> previous = state.active;
    for (int day = 1; day <= horizon; ++day) {
      const auto p = allocate(kind, state, Rng(day));
      const DayObservation obs = sample_day(
          spec, day, p, Rng::keyed(99, rep, day, Rng::kEnvironment));
      state = observe(kind, std::move(state), obs, default_config(3));
      CHECK(std::includes(previous.begin(), previous.end(),
                          state.active.begin(), state.active.end()));
      previous = state.active;
      if (state.active.size() == 1) break;
    }
  }
}

TEST_CASE("ts posteriors concentrate around the truth") {
  const int horizon = 40;
  const EnvironmentSpec spec = EnvironmentSpec::create(
      {std::vector<double>(horizon, 0.5), std::vector<double>(horizon, 0.45)},
      std::vector<std::int64_t>(horizon, 500));
  PolicyKind kind;
  kind.tag = PolicyTag::kTs;
  kind.ts_posterior_samples = 2000;
  PolicyState state = make_policy_state(kind, 2);
  for (int day = 1; day <= horizon; ++day) {
    const auto p =
        allocate(kind, state, Rng::keyed(3, 0, day, Rng::kPolicy));
    const DayObservation obs =
        sample_day(spec, day, p, Rng::keyed(3, 0, day, Rng::kEnvironment));
    state = observe(kind, std::move(state), obs, default_config(2));
  }
  // The favored arm accumulates unbounded traffic; its posterior mean must
  // sit within three posterior standard deviations of the truth.
  const double a = state.posterior_a[0];
  const double b = state.posterior_b[0];
  REQUIRE(a + b > 2000.0);
  const double mean = a / (a + b);
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  CHECK(std::abs(mean - 0.5) <= 3.0 * sd);
}

TEST_CASE("allocations are valid probability vectors for every policy") {
  const char* names[] = {"cgse", "ts", "ttts", "uniform", "bob"};
  Rng meta(41);
  for (const char* name : names) {
    PolicyKind kind;
    kind.tag = *policy_from_name(name);
    kind.ts_posterior_samples = 500;
    PolicyState state = make_policy_state(kind, 4);
    for (int day = 1; day <= 3; ++day) {
      const auto p = allocate(kind, state, Rng(meta.next_u64()));
      REQUIRE(p.size() == 4);
      double sum = 0.0;
      for (double x : p) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
      std::vector<std::int64_t> n(4, 100), r(4);
      for (int i = 0; i < 4; ++i) {
        r[i] = static_cast<std::int64_t>(meta.next_double() * 101);
        if (p[i] == 0.0) {
          n[i] = 0;
          r[i] = 0;
        }
      }
      state = observe(kind, std::move(state), make_obs(day, n, r, p),
                      default_config(4));
    }
  }
}
