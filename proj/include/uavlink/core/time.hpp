#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace uavlink {

// Simulation time and node-local timestamps are integer microseconds.
using Usec = std::chrono::microseconds;

inline constexpr Usec kZero{0};

inline constexpr double to_seconds(Usec t) {
  return static_cast<double>(t.count()) * 1e-6;
}

inline Usec from_seconds(double s) {
  return Usec{static_cast<std::int64_t>(std::llround(s * 1e6))};
}

// Instant of the k-th tick of a grid with the given rate, measured from zero.
// Computed from k rather than by accumulation so the grid never drifts.
inline Usec grid_instant(std::int64_t k, double rate_hz) {
  return Usec{static_cast<std::int64_t>(
      std::llround(static_cast<double>(k) * 1e6 / rate_hz))};
}

}  // namespace uavlink
