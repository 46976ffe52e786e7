#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>

#include "uavlink/core/time.hpp"
#include "uavlink/netem/geometry.hpp"
#include "uavlink/netem/link_config.hpp"
#include "uavlink/netem/shaper.hpp"
#include "uavlink/sim/rng.hpp"

namespace uavlink::netem {

enum class Direction { kUplink, kDownlink };

enum class DropReason { kNone, kRandom, kQueue };

struct DeliveryResult {
  std::optional<Usec> arrival;
  DropReason drop = DropReason::kNone;

  bool delivered() const { return arrival.has_value(); }
};

struct PathCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_random = 0;
  std::uint64_t dropped_queue = 0;
  std::uint64_t delivered_bytes = 0;
};

// One direction of the emulated radio path: random loss, then the shaper,
// then propagation delay plus jitter. Arrivals never reorder.
class Path {
 public:
  Path(Direction dir, const LinkConfig& link, sim::SeededRng rng,
       std::optional<GainCapacityModel> gain = std::nullopt)
      : dir_(dir), link_(link), gain_(gain), rng_(std::move(rng)),
        shaper_(nominal_capacity(Usec{0}), link.queue_limit_bytes) {}

  Direction direction() const noexcept { return dir_; }
  const LinkConfig& link() const noexcept { return link_; }
  const PathCounters& counters() const noexcept { return counters_; }
  Shaper& shaper() noexcept { return shaper_; }

  // Configured capacity before any elevation effect.
  double nominal_capacity(Usec t) const {
    return dir_ == Direction::kUplink ? link_.uplink_capacity_at(t)
                                      : link_.downlink_capacity;
  }

  // Service rate at t for the given geometry. The elevation model only
  // applies to the uplink.
  double capacity_at(Usec t, const Geometry& geom) const {
    double cap = nominal_capacity(t);
    if (gain_ && dir_ == Direction::kUplink) {
      cap = std::min(cap, effective_capacity(elevation_angle(geom), *gain_));
    }
    return cap;
  }

  double loss_probability(const Geometry& geom) const {
    const double extra = link_.height_loss.at(geom.uav.z);
    return 1.0 - (1.0 - link_.random_loss_prob) * (1.0 - extra);
  }

  DeliveryResult deliver(std::int64_t pkt_bytes, Usec t_send, const Geometry& geom) {
    ++counters_.sent;
    if (rng_.bernoulli(loss_probability(geom))) {
      ++counters_.dropped_random;
      return {std::nullopt, DropReason::kRandom};
    }
    shaper_.set_rate(capacity_at(t_send, geom));
    const auto departure = shaper_.admit(pkt_bytes, t_send);
    if (!departure) {
      ++counters_.dropped_queue;
      return {std::nullopt, DropReason::kQueue};
    }
    Usec arrival = *departure + link_.base_one_way_delay + link_.jitter.draw(rng_);
    arrival = std::max({arrival, last_arrival_, *departure});
    last_arrival_ = arrival;
    ++counters_.delivered;
    counters_.delivered_bytes += static_cast<std::uint64_t>(pkt_bytes);
    return {arrival, DropReason::kNone};
  }

 private:
  Direction dir_;
  LinkConfig link_;
  std::optional<GainCapacityModel> gain_;
  sim::SeededRng rng_;
  Shaper shaper_;
  Usec last_arrival_{0};
  PathCounters counters_{};
};

}  // namespace uavlink::netem
