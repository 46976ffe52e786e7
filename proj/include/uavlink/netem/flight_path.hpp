#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/netem/geometry.hpp"

namespace uavlink::netem {

// UAV hovering at a fixed point.
struct FixedPosition {
  double height_m = 0.0;
  double x = 5.0;
  double y = 0.0;
};

struct Waypoint {
  Usec at{};
  Position pos{};
};

// Piecewise-linear path through timestamped waypoints; holds the first/last
// position outside the covered interval.
struct WaypointPath {
  std::vector<Waypoint> points;
};

// Straight pass over the BS: the UAV flies along x at constant height with a
// lateral offset in y, starting start_distance_m before the BS and ending the
// same distance after it.
struct FlyOver {
  double height_m = 2.0;
  double lateral_offset_m = 0.5;
  double speed_mps = 0.5;
  double start_distance_m = 20.0;

  Usec closest_approach() const { return from_seconds(start_distance_m / speed_mps); }
  Usec total_time() const { return from_seconds(2.0 * start_distance_m / speed_mps); }
};

using FlightPlan = std::variant<FixedPosition, WaypointPath, FlyOver>;

struct FlightPath {
  FlightPlan plan = FixedPosition{};
  Position bs{0.0, 0.0, 0.0};

  Geometry at(Usec t) const {
    Geometry g;
    g.bs = bs;
    g.uav = std::visit([t](const auto& p) { return position(p, t); }, plan);
    return g;
  }

  // Nominal height used for sweep labels and the height loss table.
  double nominal_height() const {
    return std::visit(
        [](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, WaypointPath>) {
            return p.points.empty() ? 0.0 : p.points.front().pos.z;
          } else {
            return p.height_m;
          }
        },
        plan);
  }

 private:
  static Position position(const FixedPosition& p, Usec) { return {p.x, p.y, p.height_m}; }

  static Position position(const WaypointPath& p, Usec t) {
    if (p.points.empty()) return {};
    if (t <= p.points.front().at) return p.points.front().pos;
    if (t >= p.points.back().at) return p.points.back().pos;
    auto hi = std::upper_bound(p.points.begin(), p.points.end(), t,
                               [](Usec v, const Waypoint& w) { return v < w.at; });
    auto lo = std::prev(hi);
    const double span = static_cast<double>((hi->at - lo->at).count());
    const double w = span > 0 ? static_cast<double>((t - lo->at).count()) / span : 1.0;
    return {lo->pos.x + w * (hi->pos.x - lo->pos.x), lo->pos.y + w * (hi->pos.y - lo->pos.y),
            lo->pos.z + w * (hi->pos.z - lo->pos.z)};
  }

  static Position position(const FlyOver& p, Usec t) {
    const double x = -p.start_distance_m + p.speed_mps * to_seconds(t);
    return {x, p.lateral_offset_m, p.height_m};
  }
};

inline void validate(const FlightPath& fp) {
  auto fail = [](const std::string& what) {
    throw ConfigError(ConfigErrorKind::kValidation, "flight path: " + what);
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FixedPosition>) {
          if (!(p.height_m >= 0.0)) fail("height must be >= 0");
        } else if constexpr (std::is_same_v<T, WaypointPath>) {
          if (p.points.empty()) fail("waypoint list is empty");
          for (std::size_t i = 0; i < p.points.size(); ++i) {
            if (!(p.points[i].pos.z >= 0.0)) fail("waypoint height must be >= 0");
            if (i > 0 && p.points[i].at < p.points[i - 1].at) fail("waypoint times must be nondecreasing");
          }
        } else {
          if (!(p.height_m >= 0.0)) fail("height must be >= 0");
          if (!(p.speed_mps > 0.0)) fail("fly-over speed must be > 0");
          if (!(p.start_distance_m > 0.0)) fail("fly-over start distance must be > 0");
        }
      },
      fp.plan);
  // Reject plans that pass through the antenna.
  const auto g = fp.at(Usec{0});
  validate(g);
  (void)elevation_angle(g);
}

}  // namespace uavlink::netem
