#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "uavlink/core/error.hpp"

namespace uavlink::netem {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // flight height h for the UAV, antenna height for the BS
};

struct Geometry {
  Position uav{};
  Position bs{};
  double antenna_tilt_deg = 0.0;
};

inline void validate(const Geometry& g) {
  for (double v : {g.uav.x, g.uav.y, g.uav.z, g.bs.x, g.bs.y, g.bs.z}) {
    if (!std::isfinite(v)) throw GeometryError("non-finite position");
  }
  if (g.uav.z < 0.0) throw GeometryError("flight height must be >= 0");
}

// Angle above the horizontal plane through the BS antenna, in [0, 90].
// A UAV below the antenna plane reports 0.
inline double elevation_angle(const Geometry& g) {
  const double dx = g.uav.x - g.bs.x;
  const double dy = g.uav.y - g.bs.y;
  const double dz = g.uav.z - g.bs.z;
  const double horizontal = std::hypot(dx, dy);
  if (horizontal == 0.0 && dz == 0.0) {
    throw GeometryError("UAV and BS antenna are co-located");
  }
  const double deg = std::atan2(dz, horizontal) * 180.0 / std::numbers::pi;
  return deg < 0.0 ? 0.0 : deg;
}

// Capacity seen by the UAV as a function of elevation. The BS antenna is
// tilted toward the ground, so capacity rolls off logistically from cap_max
// to cap_min around theta_edge. rolloff_width is the angular span over which
// capacity falls from 90% to 10% of the way between the two levels.
struct GainCapacityModel {
  double theta_edge_deg = 60.0;
  double rolloff_width_deg = 8.0;
  double cap_min = 2.0e6;  // bits/s
  double cap_max = 8.5e6;  // bits/s
};

inline void validate(const GainCapacityModel& m) {
  if (!(m.cap_min < m.cap_max)) {
    throw ConfigError(ConfigErrorKind::kValidation, "gain model: cap_min must be < cap_max");
  }
  if (!(m.rolloff_width_deg > 0.0)) {
    throw ConfigError(ConfigErrorKind::kValidation, "gain model: rolloff_width must be > 0");
  }
  if (m.cap_min < 0.0) {
    throw ConfigError(ConfigErrorKind::kValidation, "gain model: cap_min must be >= 0");
  }
}

inline double effective_capacity(double angle_deg, const GainCapacityModel& m) {
  const double scale = m.rolloff_width_deg / (2.0 * std::log(9.0));
  const double x = (angle_deg - m.theta_edge_deg) / scale;
  return m.cap_min + (m.cap_max - m.cap_min) / (1.0 + std::exp(x));
}

}  // namespace uavlink::netem
