#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

#include "uavlink/cc/receiver.hpp"
#include "uavlink/cc/sender.hpp"
#include "uavlink/cc/stick_source.hpp"
#include "uavlink/netem/path.hpp"
#include "uavlink/world.hpp"

namespace uavlink::cc {

struct CcSessionConfig {
  SenderConfig sender{};
  ReceiverConfig receiver{};
  // Sending stops at `duration`; the receiver keeps polling for drain_grace.
  Usec duration{10'000'000};
  Usec drain_grace{2'000'000};
};

struct CcSessionResult {
  std::vector<CcLogEntry> tx;
  std::vector<CcLogEntry> rx;
  netem::PathCounters path{};
  ReceiverCounters receiver{};
  // Delivered by netem but still in flight at cut-off.
  std::uint64_t residue_in_flight = 0;
  // Still waiting in the receive buffer at cut-off.
  std::uint64_t residue_in_buffer = 0;
  Usec cutoff{};
  // Buffer length after each poll.
  std::vector<std::pair<Usec, std::size_t>> occupancy;
};

// Downlink control session wired into an existing world: sender -> downlink
// path -> receiver. Several sessions may share a world.
class CcLink {
 public:
  CcLink(World& world, const netem::LinkConfig& link, CcSessionConfig cfg,
         std::unique_ptr<StickSource> stick = std::make_unique<ConstantStick>(),
         bool record_occupancy = false)
      : world_(world), cfg_(cfg), stick_(std::move(stick)),
        path_(netem::Direction::kDownlink, link, world.stream(Stream::kDownlink)),
        receiver_(world.sim(), world.uav_clock(), cfg.receiver),
        sender_(world.sim(), world.ground_clock(), *stick_,
                [this](const wire::CcBytes& bytes, Usec t) { on_send(bytes, t); },
                sender_config(cfg)) {
    if (record_occupancy) {
      receiver_.set_occupancy_probe(
          [this](Usec t, std::size_t n) { occupancy_.emplace_back(t, n); });
    }
  }

  CcLink(const CcLink&) = delete;
  CcLink& operator=(const CcLink&) = delete;

  Usec cutoff() const { return cfg_.duration + cfg_.drain_grace; }

  void start() {
    receiver_.stop_at(cutoff() + Usec{1});
    receiver_.start();
    sender_.start(Usec{0});
  }

  CcSessionResult collect() const {
    CcSessionResult r;
    r.tx = sender_.log();
    r.rx = receiver_.log();
    r.path = path_.counters();
    r.receiver = receiver_.counters();
    r.residue_in_flight = in_flight_;
    r.residue_in_buffer = receiver_.occupancy();
    r.cutoff = cutoff();
    r.occupancy = occupancy_;
    return r;
  }

  const CcSender& sender() const noexcept { return sender_; }
  const CcReceiver& receiver() const noexcept { return receiver_; }
  const netem::Path& path() const noexcept { return path_; }

 private:
  static SenderConfig sender_config(const CcSessionConfig& cfg) {
    SenderConfig s = cfg.sender;
    s.stop_at = std::min(s.stop_at, cfg.duration);
    return s;
  }

  void on_send(const wire::CcBytes& bytes, Usec t) {
    const auto result = path_.deliver(static_cast<std::int64_t>(bytes.size()), t, world_.geometry_at(t));
    if (!result.delivered()) return;
    ++in_flight_;
    world_.sim().schedule(*result.arrival,
                          [this, d = CcReceiver::Datagram(bytes.begin(), bytes.end())]() mutable {
                            --in_flight_;
                            receiver_.enqueue_rx(std::move(d));
                          });
  }

  World& world_;
  CcSessionConfig cfg_;
  std::unique_ptr<StickSource> stick_;
  netem::Path path_;
  CcReceiver receiver_;
  CcSender sender_;
  std::uint64_t in_flight_ = 0;
  std::vector<std::pair<Usec, std::size_t>> occupancy_;
};

// Runs a standalone downlink session in a fresh world (clocks synced at t=0).
inline CcSessionResult cc_session(std::uint64_t seed, const netem::LinkConfig& link,
                                  const CcSessionConfig& cfg, ClockSettings clocks = {},
                                  netem::FlightPath flight = {},
                                  std::unique_ptr<StickSource> stick = std::make_unique<ConstantStick>(),
                                  bool record_occupancy = false) {
  World world(seed, clocks, std::move(flight));
  CcLink link_session(world, link, cfg, std::move(stick), record_occupancy);
  link_session.start();
  world.sim().run_until(link_session.cutoff());
  return link_session.collect();
}

}  // namespace uavlink::cc
