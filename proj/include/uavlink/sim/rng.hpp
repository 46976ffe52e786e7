#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace uavlink::sim {

// SplitMix64 finalizer. Used to derive independent stream seeds and sweep
// member seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master,
                                 std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index + 1));
}

// Deterministic generator: MT19937-64 (its output sequence is fixed by the
// C++ standard) with distributions implemented here, since the standard
// library's distributions differ between implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  // Independent stream for a named consumer; does not advance this stream.
  SeededRng fork(std::uint64_t stream_id) const {
    return SeededRng(mix_seed(seed_, stream_id));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi], unbiased (rejection on the top range).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  // Normal truncated to mean ± limit by resampling.
  double truncated_normal(double mean, double sigma, double limit) {
    if (sigma <= 0.0) return mean;
    for (;;) {
      const double z = normal(0.0, sigma);
      if (std::abs(z) <= limit) return mean + z;
    }
  }

  // Log-normal parameterized by its own mean and coefficient of variation.
  double lognormal_mean_cv(double mean, double cv) {
    if (cv <= 0.0) return mean;
    const double s2 = std::log1p(cv * cv);
    const double mu = std::log(mean) - 0.5 * s2;
    return std::exp(mu + std::sqrt(s2) * normal());
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace uavlink::sim
