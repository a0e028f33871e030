#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace adexp {

// Counter-based generator: a splitmix64 walk over a stream key derived by
// hashing (master_seed, replication, day, stream). Streams with different
// keys are independent for simulation purposes, and a given key always
// reproduces the same sequence, so replications and days can be sampled in
// any order (or concurrently) without coordination.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(mix(key ^ 0x9e3779b97f4a7c15ULL)) {}

  // Stream ids used by the harness; tests may use any other values.
  enum Stream : std::uint64_t {
    kEnvironment = 1,
    kPolicy = 2,
  };

  static Rng keyed(std::uint64_t master_seed, std::uint64_t replication,
                   std::uint64_t day, std::uint64_t stream) {
    std::uint64_t h = mix(master_seed ^ 0x8f2d3a9b1c5e7f01ULL);
    h = mix(h ^ (replication * 0xd1342543de82ef95ULL));
    h = mix(h ^ (day * 0xaf251af3b0f025b5ULL));
    h = mix(h ^ (stream * 0x9e3779b97f4a7c15ULL));
    return Rng(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the polar method; the spare value is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_double();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double next_beta(double a, double b) {
    const double x = next_gamma(a);
    const double y = next_gamma(b);
    return x / (x + y);
  }

  // Exact Binomial(n, p) by per-trial inversion. Daily batches are at most
  // a few tens of thousands, so the linear walk is not a bottleneck.
  std::int64_t next_binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::int64_t successes = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      successes += next_double() < p ? 1 : 0;
    }
    return successes;
  }

  // Multinomial(n, probs) via sequential conditional binomials.
  std::vector<std::int64_t> next_multinomial(std::int64_t n,
                                             std::span<const double> probs) {
    std::vector<std::int64_t> counts(probs.size(), 0);
    std::int64_t remaining = n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      if (remaining == 0) break;
      if (probs[i] <= 0.0) continue;
      double cond = mass_left > 0.0 ? probs[i] / mass_left : 1.0;
      if (cond > 1.0) cond = 1.0;
      counts[i] = next_binomial(remaining, cond);
      remaining -= counts[i];
      mass_left -= probs[i];
      if (mass_left <= 0.0) mass_left = 0.0;
    }
    if (!probs.empty() && probs.back() > 0.0) {
      counts.back() = remaining;
    } else if (remaining > 0) {
      // Rounding pushed leftover mass onto a zero-probability tail; give the
      // remainder to the last positive entry instead.
      for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
          counts[i] += remaining;
          break;
        }
      }
    }
    return counts;
  }

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }
  result_type operator()() { return next_u64(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace adexp
