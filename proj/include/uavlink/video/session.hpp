#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "uavlink/netem/path.hpp"
#include "uavlink/video/encoder.hpp"
#include "uavlink/video/fps_controller.hpp"
#include "uavlink/video/reassembler.hpp"
#include "uavlink/video/segmenter.hpp"
#include "uavlink/world.hpp"

namespace uavlink::video {

struct VideoSessionConfig {
  Resolution resolution = Resolution::k1280x720;
  EncoderModel encoder{};
  FpsControllerConfig controller{};
  bool adaptive = true;
  double fixed_fps = 30.0;  // used when !adaptive
  int mtu_payload = kDefaultMtuPayload;
  Usec gap_timeout{500'000};
  Usec display_latency{0};
  Usec duration{60'000'000};
  Usec drain_grace{2'000'000};
};

// One row per captured frame.
struct VideoFrameRecord {
  std::uint32_t frame_seq = 0;
  Usec t_vt{};                 // capture, sender-local
  std::optional<Usec> t_vr;    // display, receiver-local; absent if lost
  std::int64_t size_bits = 0;  // S_Vd
  std::uint32_t segments_sent = 0;
  std::uint32_t segments_lost = 0;
  double fps_at_capture = 0.0;
  Usec capture_true{};
};

// One row per segment handed to the uplink.
struct SegmentRecord {
  Usec sent_true{};
  std::optional<Usec> arrival_true;
  std::int32_t payload_bytes = 0;
};

struct FpsSample {
  Usec at{};
  double fps = 0.0;
};

struct VideoLog {
  Resolution resolution = Resolution::k1280x720;
  Usec duration{};
  std::vector<VideoFrameRecord> frames;
  std::vector<SegmentRecord> segments;
  std::vector<FpsSample> fps_trace;
  netem::PathCounters path{};
  ReassemblerCounters reassembly{};
};

// Uplink video stream wired into a world: capture -> segmentize -> uplink
// path -> reassembly, with the FPS controller fed from receiver-side window
// statistics.
class VideoLink {
 public:
  VideoLink(World& world, const netem::LinkConfig& link, std::optional<netem::GainCapacityModel> gain,
            VideoSessionConfig cfg)
      : world_(world), cfg_(cfg),
        path_(netem::Direction::kUplink, link, world.stream(Stream::kUplink), gain),
        encoder_rng_(world.stream(Stream::kEncoder)),
        reassembler_(cfg.gap_timeout, cfg.display_latency),
        controller_(cfg.controller) {
    validate(cfg_.encoder);
    if (cfg_.adaptive) validate(cfg_.controller);
    if (!cfg_.adaptive && !(cfg_.fixed_fps > 0.0)) {
      throw ConfigError(ConfigErrorKind::kValidation, "video: fixed fps must be > 0");
    }
  }

  VideoLink(const VideoLink&) = delete;
  VideoLink& operator=(const VideoLink&) = delete;

  Usec cutoff() const { return cfg_.duration + cfg_.drain_grace; }
  double fps() const { return cfg_.adaptive ? controller_.fps() : cfg_.fixed_fps; }

  void start() {
    // The camera clock must not read negative at the first capture.
    anchor_ = std::max(Usec{0}, world_.uav_clock().error_bound());
    log_.fps_trace.push_back({Usec{0}, fps()});
    if (anchor_ < cfg_.duration) {
      world_.sim().schedule(anchor_, [this] { capture_on_epoch(0, 0); });
    }
    if (cfg_.adaptive) {
      world_.sim().schedule(cfg_.controller.window, [this] { on_window(); });
    }
  }

  VideoLog collect() {
    for (const auto& lost : reassembler_.finalize()) note_lost(lost);
    log_.resolution = cfg_.resolution;
    log_.duration = cfg_.duration;
    log_.path = path_.counters();
    log_.reassembly = reassembler_.counters();
    for (auto& rec : log_.frames) {
      rec.segments_lost = rec.segments_sent - received_per_frame_[rec.frame_seq];
      if (rec.segments_lost > 0) rec.t_vr.reset();
    }
    return log_;
  }

  const netem::Path& path() const noexcept { return path_; }

 private:
  void capture() {
    const Usec t = world_.now();
    const auto seq = static_cast<std::uint32_t>(log_.frames.size());
    const auto frame = capture_frame(cfg_.encoder, cfg_.resolution, fps(), seq, world_.uav_now(), encoder_rng_);
    const auto segments = segmentize(frame, cfg_.mtu_payload);
    log_.frames.push_back({seq, frame.capture_ts, std::nullopt, frame.size_bits(),
                           static_cast<std::uint32_t>(segments.size()), 0, frame.fps, t});
    received_per_frame_.push_back(0);
    const auto geom = world_.geometry_at(t);
    for (const auto& seg : segments) {
      const auto bytes = wire::encode_segment_header(seg.header);
      const auto result = path_.deliver(seg.wire_bytes(), t, geom);
      log_.segments.push_back({t, result.arrival, seg.header.payload_len});
      if (!result.delivered()) continue;
      world_.sim().schedule(*result.arrival, [this, bytes] { on_arrival(bytes); });
    }
  }

  void on_arrival(const wire::SegmentHeaderBytes& bytes) {
    const auto h = wire::decode_segment_header(bytes);
    const auto outcome = reassembler_.on_segment(h, world_.now(), world_.ground_now());
    if (outcome.kind == ReassemblyOutcome::Kind::kDuplicate) return;
    ++received_per_frame_[h.frame_seq];
    ++window_.received;
    if (outcome.completed) {
      auto& rec = log_.frames[outcome.completed->frame.frame_seq];
      rec.t_vr = outcome.completed->display_local;
      window_.delay_sum += (*rec.t_vr - rec.t_vt).count();
      ++window_.completed;
      window_.segment_count_sum += rec.segments_sent;
    }
    arm_expiry();
  }

  void arm_expiry() {
    const auto d = reassembler_.next_deadline();
    if (!d || (expiry_at_ && *expiry_at_ <= *d)) return;
    expiry_at_ = std::max(*d, world_.now());
    world_.sim().schedule(*expiry_at_, [this, at = *expiry_at_] {
      if (expiry_at_ != at) return;
      expiry_at_.reset();
      for (const auto& lost : reassembler_.expire(world_.now())) note_lost(lost);
      arm_expiry();
    });
  }

  void note_lost(const LostFrame& lost) {
    std::uint32_t missing = 0;
    if (lost.segment_count > 0) {
      missing = lost.segment_count - lost.segments_received;
    } else {
      // Never seen: estimate its size from the frames completed this window.
      missing = window_.completed > 0
                    ? static_cast<std::uint32_t>(window_.segment_count_sum / window_.completed)
                    : 1;
    }
    window_.lost += missing;
  }

  void on_window() {
    FpsFeedback fb;
    const auto total = window_.lost + window_.received;
    fb.segment_loss_fraction = total > 0 ? static_cast<double>(window_.lost) / static_cast<double>(total) : 0.0;
    fb.mean_frame_delay = window_.completed > 0 ? Usec{window_.delay_sum / static_cast<std::int64_t>(window_.completed)}
                                                : Usec{0};
    const double before = controller_.fps();
    const double after = controller_.update(fb);
    window_ = {};
    const Usec now = world_.now();
    log_.fps_trace.push_back({now, after});
    if (after != before) {
      rearm_capture(now);
    }
    if (now + cfg_.controller.window < cfg_.duration) {
      world_.sim().schedule(now + cfg_.controller.window, [this] { on_window(); });
    }
  }

  // Restarts the capture grid at the new rate, one new-rate interval after
  // the previous capture (or now, if that has already passed).
  void rearm_capture(Usec now) {
    ++capture_epoch_;
    const auto epoch = capture_epoch_;
    const Usec last = log_.frames.empty() ? now : log_.frames.back().capture_true;
    const Usec next = std::max(now, last + grid_instant(1, fps()));
    anchor_ = next;
    if (next >= cfg_.duration) return;
    world_.sim().schedule(next, [this, epoch] { capture_on_epoch(epoch, 0); });
  }

  void capture_on_epoch(std::uint64_t epoch, std::int64_t k) {
    if (epoch != capture_epoch_) return;
    capture();
    const Usec t = anchor_ + grid_instant(k + 1, fps());
    if (t >= cfg_.duration) return;
    world_.sim().schedule(t, [this, epoch, k] { capture_on_epoch(epoch, k + 1); });
  }

  struct WindowStats {
    std::uint64_t received = 0;
    std::uint64_t lost = 0;
    std::uint64_t completed = 0;
    std::uint64_t segment_count_sum = 0;
    std::int64_t delay_sum = 0;
  };

  World& world_;
  VideoSessionConfig cfg_;
  netem::Path path_;
  sim::SeededRng encoder_rng_;
  Reassembler reassembler_;
  FpsController controller_;
  VideoLog log_{};
  std::vector<std::uint32_t> received_per_frame_;
  WindowStats window_{};
  Usec anchor_{0};
  std::uint64_t capture_epoch_ = 0;
  std::optional<Usec> expiry_at_;
};

inline VideoLog video_session(std::uint64_t seed, const netem::LinkConfig& link,
                              std::optional<netem::GainCapacityModel> gain, const VideoSessionConfig& cfg,
                              netem::FlightPath flight = {}, ClockSettings clocks = {}) {
  World world(seed, clocks, std::move(flight));
  VideoLink v(world, link, gain, cfg);
  v.start();
  world.sim().run_until(v.cutoff());
  return v.collect();
}

}  // namespace uavlink::video
