#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "uavlink/core/time.hpp"
#include "uavlink/metrics/aggregate.hpp"
#include "uavlink/video/session.hpp"

namespace uavlink::metrics {

struct VideoStats {
  // Completed frames only.
  std::vector<std::int64_t> delays_us;      // D_Vd = T_Vr - T_Vt
  std::vector<double> frame_throughput_bps;  // T_Vd = S_Vd / D_Vd
  std::optional<Summary> delay;
  // Sum of S_Vd over completed frames divided by the session duration.
  double aggregate_throughput_bps = 0.0;

  Usec window{1'000'000};
  // Delivered segment payload bits per window (by arrival), in bits/s.
  std::vector<double> window_throughput_bps;
  // Lost / sent segments per window (by send time); 0 for idle windows.
  std::vector<double> window_segment_loss;

  std::uint64_t frames_total = 0;
  std::uint64_t frames_completed = 0;
  std::uint64_t segments_sent = 0;
  std::uint64_t segments_lost = 0;

  double segment_loss_fraction() const {
    return segments_sent == 0 ? 0.0 : static_cast<double>(segments_lost) / static_cast<double>(segments_sent);
  }
};

// Throughput of one frame: bits over delay. d must be positive.
inline double frame_throughput(std::int64_t size_bits, Usec d) {
  return static_cast<double>(size_bits) / to_seconds(d);
}

inline VideoStats video_stats(const video::VideoLog& log, Usec window = Usec{1'000'000}) {
  VideoStats s;
  s.window = window;
  std::int64_t delivered_frame_bits = 0;
  for (const auto& f : log.frames) {
    ++s.frames_total;
    s.segments_sent += f.segments_sent;
    s.segments_lost += f.segments_lost;
    if (!f.t_vr) continue;
    ++s.frames_completed;
    const Usec d = *f.t_vr - f.t_vt;
    s.delays_us.push_back(d.count());
    if (d > kZero) s.frame_throughput_bps.push_back(frame_throughput(f.size_bits, d));
    delivered_frame_bits += f.size_bits;
  }
  if (!s.delays_us.empty()) s.delay = aggregate(s.delays_us);
  if (log.duration > kZero) {
    s.aggregate_throughput_bps = static_cast<double>(delivered_frame_bits) / to_seconds(log.duration);
  }

  const auto n_windows = static_cast<std::size_t>(
      log.duration > kZero ? (log.duration.count() + window.count() - 1) / window.count() : 0);
  std::vector<double> bits(n_windows, 0.0);
  std::vector<double> sent(n_windows, 0.0);
  std::vector<double> lost(n_windows, 0.0);
  auto index = [&](Usec t) -> std::optional<std::size_t> {
    if (t < kZero) return std::nullopt;
    const auto i = static_cast<std::size_t>(t.count() / window.count());
    if (i >= n_windows) return std::nullopt;
    return i;
  };
  for (const auto& seg : log.segments) {
    if (auto i = index(seg.sent_true)) {
      sent[*i] += 1;
      if (!seg.arrival_true) lost[*i] += 1;
    }
    if (seg.arrival_true) {
      if (auto i = index(*seg.arrival_true)) bits[*i] += 8.0 * seg.payload_bytes;
    }
  }
  const double w = to_seconds(window);
  s.window_throughput_bps.resize(n_windows);
  s.window_segment_loss.resize(n_windows);
  for (std::size_t i = 0; i < n_windows; ++i) {
    s.window_throughput_bps[i] = bits[i] / w;
    s.window_segment_loss[i] = sent[i] > 0 ? lost[i] / sent[i] : 0.0;
  }
  return s;
}

}  // namespace uavlink::metrics
