#pragma once

#include <cstdint>

#include "uavlink/netem/flight_path.hpp"
#include "uavlink/sim/event_queue.hpp"
#include "uavlink/sim/node_clock.hpp"
#include "uavlink/sim/rng.hpp"

namespace uavlink {

// Stream ids for SeededRng::fork. Each consumer draws from its own stream so
// that enabling one subsystem never perturbs another.
enum class Stream : std::uint64_t {
  kGroundClock = 1,
  kUavClock = 2,
  kDownlink = 3,
  kUplink = 4,
  kEncoder = 5,
  kStick = 6,
};

struct ClockSettings {
  sim::NodeClock ground{};
  sim::NodeClock uav{};
};

// One simulated universe: scheduler, the two endpoint clocks (ground side and
// UAV side) kept in sync, and the flight path. Single-threaded; independent
// worlds share nothing.
class World {
 public:
  World(std::uint64_t seed, ClockSettings clocks = {}, netem::FlightPath flight = {})
      : rng_(seed), ground_clock_(clocks.ground), uav_clock_(clocks.uav),
        flight_(std::move(flight)),
        ground_sync_(sim_, ground_clock_, rng_.fork(static_cast<std::uint64_t>(Stream::kGroundClock))),
        uav_sync_(sim_, uav_clock_, rng_.fork(static_cast<std::uint64_t>(Stream::kUavClock))) {
    ground_sync_.start(Usec{0});
    uav_sync_.start(Usec{0});
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  sim::Simulator& sim() noexcept { return sim_; }
  Usec now() const noexcept { return sim_.now(); }

  sim::SeededRng stream(Stream s) const { return rng_.fork(static_cast<std::uint64_t>(s)); }

  const sim::NodeClock& ground_clock() const noexcept { return ground_clock_; }
  const sim::NodeClock& uav_clock() const noexcept { return uav_clock_; }
  Usec ground_now() const { return sim::local_now(ground_clock_, sim_.now()); }
  Usec uav_now() const { return sim::local_now(uav_clock_, sim_.now()); }

  const netem::FlightPath& flight() const noexcept { return flight_; }
  netem::Geometry geometry() const { return flight_.at(sim_.now()); }
  netem::Geometry geometry_at(Usec t) const { return flight_.at(t); }

 private:
  sim::SeededRng rng_;
  sim::Simulator sim_;
  sim::NodeClock ground_clock_;
  sim::NodeClock uav_clock_;
  netem::FlightPath flight_;
  sim::ClockSyncService ground_sync_;
  sim::ClockSyncService uav_sync_;
};

}  // namespace uavlink
