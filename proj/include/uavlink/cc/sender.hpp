#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "uavlink/cc/stick_source.hpp"
#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/sim/event_queue.hpp"
#include "uavlink/sim/node_clock.hpp"
#include "uavlink/wire/cc_frame.hpp"
#include "uavlink/wire/stick.hpp"

namespace uavlink::cc {

// (frame_id, node-local timestamp) as written to the tx/rx logs.
struct CcLogEntry {
  std::uint32_t frame_id = 0;
  Usec timestamp{};

  friend bool operator==(const CcLogEntry&, const CcLogEntry&) = default;
};

struct SenderConfig {
  double send_frequency_hz = 10.0;
  // Stop after this many frames, if set.
  std::optional<std::uint64_t> max_frames;
  // No tick at or after this time.
  Usec stop_at = Usec::max();
};

// Ground-side control sender: every 1/f seconds read the stick, normalize,
// encode, send, and log (frame_id, T_Ct). Tick k fires at start + k * 10^6/f
// microseconds, rounded, so the period never accumulates rounding error.
class CcSender {
 public:
  using Sink = std::function<void(const wire::CcBytes&, Usec t_true)>;

  CcSender(sim::Simulator& sim, const sim::NodeClock& clock, StickSource& stick, Sink sink,
           SenderConfig cfg)
      : sim_(sim), clock_(clock), stick_(stick), sink_(std::move(sink)), cfg_(cfg) {
    if (!(cfg_.send_frequency_hz > 0.0)) {
      throw ConfigError(ConfigErrorKind::kValidation, "send frequency must be > 0");
    }
  }

  void start(Usec at) {
    start_ = at;
    schedule(0);
  }

  const std::vector<CcLogEntry>& log() const noexcept { return log_; }
  std::uint32_t next_frame_id() const noexcept { return next_id_; }
  bool stopped() const noexcept { return stopped_; }

  // Builds, emits, and logs one frame. Returns false when the stick source is
  // exhausted.
  bool tick(Usec t) {
    const auto sample = stick_.next(t);
    if (!sample) {
      stopped_ = true;
      return false;
    }
    const wire::CcFrame frame{next_id_, wire::normalize_stick(sample->roll),
                              wire::normalize_stick(sample->pitch), wire::normalize_stick(sample->yaw),
                              wire::normalize_stick(sample->thrust)};
    const auto bytes = wire::encode_cc(frame);
    log_.push_back({next_id_, sim::local_now(clock_, t)});
    ++next_id_;
    sink_(bytes, t);
    return true;
  }

 private:
  void schedule(std::int64_t k) {
    if (cfg_.max_frames && static_cast<std::uint64_t>(k) >= *cfg_.max_frames) {
      stopped_ = true;
      return;
    }
    const Usec t = start_ + grid_instant(k, cfg_.send_frequency_hz);
    if (t >= cfg_.stop_at) {
      stopped_ = true;
      return;
    }
    sim_.schedule(t, [this, k] {
      if (tick(sim_.now())) schedule(k + 1);
    });
  }

  sim::Simulator& sim_;
  const sim::NodeClock& clock_;
  StickSource& stick_;
  Sink sink_;
  SenderConfig cfg_;
  Usec start_{0};
  std::uint32_t next_id_ = 0;
  std::vector<CcLogEntry> log_;
  bool stopped_ = false;
};

}  // namespace uavlink::cc
