#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/sim/rng.hpp"

namespace uavlink::netem {

enum class JitterKind { kNone, kTruncatedNormal, kUniform };

// Per-packet extra one-way delay, zero-mean.
struct JitterModel {
  JitterKind kind = JitterKind::kTruncatedNormal;
  Usec sigma{1'000};        // normal sigma, or uniform half-width
  double truncate_sigmas = 3.0;

  Usec draw(sim::SeededRng& rng) const {
    const double s = static_cast<double>(sigma.count());
    switch (kind) {
      case JitterKind::kNone:
        return kZero;
      case JitterKind::kTruncatedNormal:
        return Usec{std::llround(rng.truncated_normal(0.0, s, truncate_sigmas * s))};
      case JitterKind::kUniform:
        return Usec{std::llround(rng.uniform(-s, s))};
    }
    return kZero;
  }

  Usec max_abs() const {
    switch (kind) {
      case JitterKind::kNone:
        return kZero;
      case JitterKind::kTruncatedNormal:
        return Usec{static_cast<std::int64_t>(
            std::ceil(truncate_sigmas * static_cast<double>(sigma.count())))};
      case JitterKind::kUniform:
        return sigma;
    }
    return kZero;
  }
};

// Optional extra loss as a function of flight height. The defaults are
// calibration values (2 m flies with the strongest line of sight), not
// measurements.
struct HeightLossTable {
  bool enabled = false;
  std::map<double, double> loss_by_height{{0.0, 0.002}, {1.0, 0.004}, {2.0, 0.001}};

  // Linear interpolation between entries, clamped at the ends.
  double at(double height_m) const {
    if (!enabled || loss_by_height.empty()) return 0.0;
    auto hi = loss_by_height.lower_bound(height_m);
    if (hi == loss_by_height.begin()) return hi->second;
    if (hi == loss_by_height.end()) return std::prev(hi)->second;
    auto lo = std::prev(hi);
    const double w = (height_m - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }
};

// Scheduled change of the uplink capacity, e.g. for step-response runs.
struct CapacityStep {
  Usec at{};
  double bits_per_s = 0.0;
};

// Defaults: the 25-PRB profile (8.78 / 16.57 Mb/s) with the one-way delay
// taken as half of the 27.66 ms round trip.
struct LinkConfig {
  Usec base_one_way_delay{13'830};
  JitterModel jitter{};
  double random_loss_prob = 0.0;
  double uplink_capacity = 8.78e6;    // bits/s
  double downlink_capacity = 16.57e6;  // bits/s
  std::int64_t queue_limit_bytes = 200'000;
  HeightLossTable height_loss{};
  std::vector<CapacityStep> uplink_steps{};

  // Uplink capacity at t after applying any steps.
  double uplink_capacity_at(Usec t) const {
    double cap = uplink_capacity;
    for (const auto& s : uplink_steps) {
      if (s.at <= t) cap = s.bits_per_s;
    }
    return cap;
  }
};

// 50-PRB profile, for completeness of the channel presets.
inline LinkConfig link_50prb() {
  LinkConfig c;
  c.uplink_capacity = 18.77e6;
  c.downlink_capacity = 34.3e6;
  c.base_one_way_delay = Usec{14'500};
  return c;
}

inline void validate(const LinkConfig& c) {
  auto fail = [](const std::string& what) {
    throw ConfigError(ConfigErrorKind::kValidation, "link: " + what);
  };
  if (c.base_one_way_delay < kZero) fail("base_one_way_delay must be >= 0");
  if (!(c.random_loss_prob >= 0.0 && c.random_loss_prob <= 1.0))
    fail("random_loss_prob must be in [0, 1]");
  if (!(c.uplink_capacity > 0.0)) fail("uplink capacity must be > 0");
  if (!(c.downlink_capacity > 0.0)) fail("downlink capacity must be > 0");
  if (c.queue_limit_bytes <= 0) fail("queue_limit must be > 0");
  if (c.jitter.sigma < kZero) fail("jitter sigma must be >= 0");
  if (c.jitter.kind == JitterKind::kTruncatedNormal && !(c.jitter.truncate_sigmas > 0.0))
    fail("jitter truncation must be > 0");
  for (const auto& [h, p] : c.height_loss.loss_by_height) {
    if (!(p >= 0.0 && p <= 1.0)) fail("height loss probability must be in [0, 1]");
    if (h < 0.0) fail("height loss table heights must be >= 0");
  }
  for (const auto& s : c.uplink_steps) {
    if (!(s.bits_per_s >= 0.0)) fail("uplink step capacity must be >= 0");
  }
}

}  // namespace uavlink::netem
