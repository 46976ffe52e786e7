#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/sim/rng.hpp"

namespace uavlink::video {

enum class Resolution { k320x240, k640x480, k1280x720 };

inline constexpr std::array<Resolution, 3> kAllResolutions{
    Resolution::k320x240, Resolution::k640x480, Resolution::k1280x720};

inline constexpr int width(Resolution r) {
  switch (r) {
    case Resolution::k320x240: return 320;
    case Resolution::k640x480: return 640;
    case Resolution::k1280x720: return 1280;
  }
  return 0;
}

inline constexpr int height(Resolution r) {
  switch (r) {
    case Resolution::k320x240: return 240;
    case Resolution::k640x480: return 480;
    case Resolution::k1280x720: return 720;
  }
  return 0;
}

inline std::string to_string(Resolution r) {
  return std::to_string(width(r)) + "x" + std::to_string(height(r));
}

inline std::optional<Resolution> parse_resolution(std::string_view s) {
  for (auto r : kAllResolutions) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

// Encoded frame size process. The 320x240 rate is the measured unconstrained
// stream rate; the two larger rates are calibration values chosen above the
// 8.78 Mb/s uplink so the stream is capacity-limited.
struct EncoderModel {
  std::array<double, 3> nominal_bitrate{7.08e6, 12.0e6, 20.0e6};  // at reference_fps
  double size_jitter_cv = 0.2;
  double reference_fps = 30.0;

  double nominal_for(Resolution r) const { return nominal_bitrate[static_cast<std::size_t>(r)]; }

  // Mean encoded frame size S_Vd. Frames are a fixed amount of content per
  // picture, so the offered bitrate scales with FPS.
  double mean_frame_bits(Resolution r) const { return nominal_for(r) / reference_fps; }
};

inline void validate(const EncoderModel& e) {
  for (double b : e.nominal_bitrate) {
    if (!(b > 0.0)) throw ConfigError(ConfigErrorKind::kValidation, "encoder: nominal bitrate must be > 0");
  }
  if (!(e.size_jitter_cv >= 0.0)) throw ConfigError(ConfigErrorKind::kValidation, "encoder: size CV must be >= 0");
  if (!(e.reference_fps > 0.0)) throw ConfigError(ConfigErrorKind::kValidation, "encoder: reference fps must be > 0");
}

struct VideoFrame {
  std::uint32_t frame_seq = 0;
  Usec capture_ts{};  // sender-local, T_Vt
  std::int64_t size_bytes = 0;
  double fps = 0.0;

  std::int64_t size_bits() const { return size_bytes * 8; }
  friend bool operator==(const VideoFrame&, const VideoFrame&) = default;
};

// Draws one encoded frame. Sizes are whole bytes, log-normal around the mean
// with the configured coefficient of variation.
inline VideoFrame capture_frame(const EncoderModel& enc, Resolution res, double fps,
                                std::uint32_t frame_seq, Usec capture_local, sim::SeededRng& rng) {
  const double bits = rng.lognormal_mean_cv(enc.mean_frame_bits(res), enc.size_jitter_cv);
  const auto bytes = std::max<std::int64_t>(1, std::llround(bits / 8.0));
  return {frame_seq, capture_local, bytes, fps};
}

}  // namespace uavlink::video
