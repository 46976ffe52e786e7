#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "uavlink/cc/sender.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/sim/event_queue.hpp"
#include "uavlink/sim/node_clock.hpp"
#include "uavlink/wire/cc_frame.hpp"

namespace uavlink::cc {

// What the receiver hands to the flight controller each poll.
struct ControlAction {
  float roll = 0.0f;
  float pitch = 0.0f;
  float yaw = 0.0f;
  float thrust = 0.0f;
  bool is_failsafe = true;

  static ControlAction failsafe() { return {}; }
  friend bool operator==(const ControlAction&, const ControlAction&) = default;
};

// The defaults give one dequeue every 25 ms (40 Hz effective drain) and a
// saturated wait of 54 * 25 ms = 1350 ms.
struct ReceiverConfig {
  std::size_t capacity_frames = 54;
  Usec poll_period{20'000};
  Usec processing_time{5'000};
  Usec first_poll{0};

  Usec cycle() const { return poll_period + processing_time; }
};

struct ReceiverCounters {
  std::uint64_t enqueued = 0;
  std::uint64_t overflow_drops = 0;
  std::uint64_t corrupt = 0;
  std::uint64_t polls = 0;
  std::uint64_t failsafe_polls = 0;
  std::size_t max_occupancy = 0;
};

// UAV-side polling receiver: a bounded socket buffer with tail drop, drained
// one datagram per poll. An empty or undecodable poll yields the zero
// failsafe action.
class CcReceiver {
 public:
  using Datagram = std::vector<wire::Byte>;
  using ActionSink = std::function<void(const ControlAction&, Usec t_true)>;

  CcReceiver(sim::Simulator& sim, const sim::NodeClock& clock, ReceiverConfig cfg)
      : sim_(sim), clock_(clock), cfg_(cfg) {}

  void set_action_sink(ActionSink sink) { action_sink_ = std::move(sink); }
  // Called with the buffer length after every poll.
  void set_occupancy_probe(std::function<void(Usec, std::size_t)> probe) {
    occupancy_probe_ = std::move(probe);
  }

  void start() { schedule_poll(cfg_.first_poll); }
  void stop_at(Usec t) { stop_at_ = t; }

  // Returns false if the datagram was discarded because the buffer is full.
  bool enqueue_rx(Datagram datagram) {
    if (buffer_.size() >= cfg_.capacity_frames) {
      ++counters_.overflow_drops;
      return false;
    }
    buffer_.push_back(std::move(datagram));
    ++counters_.enqueued;
    counters_.max_occupancy = std::max(counters_.max_occupancy, buffer_.size());
    return true;
  }

  ControlAction poll(Usec t) {
    ++counters_.polls;
    ControlAction action = ControlAction::failsafe();
    if (!buffer_.empty()) {
      Datagram d = std::move(buffer_.front());
      buffer_.pop_front();
      try {
        const auto frame = wire::decode_cc(d);
        action = {frame.roll, frame.pitch, frame.yaw, frame.thrust, false};
        log_.push_back({frame.frame_id, sim::local_now(clock_, t)});
      } catch (const WireError&) {
        ++counters_.corrupt;
      }
    }
    if (action.is_failsafe) ++counters_.failsafe_polls;
    last_action_ = action;
    if (action_sink_) action_sink_(action, t);
    if (occupancy_probe_) occupancy_probe_(t, buffer_.size());
    return action;
  }

  std::size_t occupancy() const noexcept { return buffer_.size(); }
  const ReceiverConfig& config() const noexcept { return cfg_; }
  const ReceiverCounters& counters() const noexcept { return counters_; }
  const std::vector<CcLogEntry>& log() const noexcept { return log_; }
  const ControlAction& last_action() const noexcept { return last_action_; }

 private:
  void schedule_poll(Usec t) {
    if (t >= stop_at_) return;
    sim_.schedule(t, [this] {
      poll(sim_.now());
      schedule_poll(sim_.now() + cfg_.cycle());
    });
  }

  sim::Simulator& sim_;
  const sim::NodeClock& clock_;
  ReceiverConfig cfg_;
  std::deque<Datagram> buffer_;
  std::vector<CcLogEntry> log_;
  ControlAction last_action_{};
  ReceiverCounters counters_{};
  ActionSink action_sink_;
  std::function<void(Usec, std::size_t)> occupancy_probe_;
  Usec stop_at_ = Usec::max();
};

}  // namespace uavlink::cc
