#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "adexp/rng.hpp"

using adexp::Rng;

TEST_CASE("same key reproduces the same stream") {
  Rng a = Rng::keyed(42, 7, 3, Rng::kEnvironment);
  Rng b = Rng::keyed(42, 7, 3, Rng::kEnvironment);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different replication, day, or stream keys decorrelate") {
  Rng base = Rng::keyed(42, 7, 3, Rng::kEnvironment);
  Rng rep = Rng::keyed(42, 8, 3, Rng::kEnvironment);
  Rng day = Rng::keyed(42, 7, 4, Rng::kEnvironment);
  Rng stream = Rng::keyed(42, 7, 3, Rng::kPolicy);
  const std::uint64_t first = base.next_u64();
  CHECK(first != rep.next_u64());
  CHECK(first != day.next_u64());
  CHECK(first != stream.next_u64());
}

TEST_CASE("uniform doubles live in [0,1) with mean near 1/2") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("binomial matches mean and variance") {
  Rng rng(7);
  const int reps = 20000;
  const std::int64_t n = 100;
  const double p = 0.3;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double x = static_cast<double>(rng.next_binomial(n, p));
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / reps;
  const double var = sumsq / reps - mean * mean;
  CHECK(mean == doctest::Approx(30.0).epsilon(0.01));
  CHECK(var == doctest::Approx(21.0).epsilon(0.1));
  CHECK(rng.next_binomial(50, 0.0) == 0);
  CHECK(rng.next_binomial(50, 1.0) == 50);
}

TEST_CASE("multinomial counts sum to n and respect zero mass") {
  Rng rng(9);
  const std::vector<double> probs = {0.5, 0.0, 0.3, 0.2};
  for (int i = 0; i < 200; ++i) {
    const auto counts = rng.next_multinomial(1000, probs);
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    REQUIRE(total == 1000);
    REQUIRE(counts[1] == 0);
  }
}

TEST_CASE("beta draws match Beta(a,b) moments") {
  Rng rng(11);
  const double a = 4.0, b = 8.0;
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_beta(a, b);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(a / (a + b)).epsilon(0.01));
  CHECK(var ==
        doctest::Approx(a * b / ((a + b) * (a + b) * (a + b + 1))).epsilon(0.05));
}

TEST_CASE("normal draws match N(0,1) moments") {
  Rng rng(13);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}
