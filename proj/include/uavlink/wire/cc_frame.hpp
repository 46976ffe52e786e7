#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "uavlink/core/error.hpp"
#include "uavlink/wire/byte_order.hpp"

namespace uavlink::wire {

// One command-and-control sample. Layout on the wire (20 bytes, big-endian):
//
//   0..3   frame_id  u32
//   4..7   roll      IEEE-754 binary32
//   8..11  pitch     binary32
//   12..15 yaw       binary32
//   16..19 thrust    binary32
struct CcFrame {
  std::uint32_t frame_id = 0;
  float roll = 0.0f;
  float pitch = 0.0f;
  float yaw = 0.0f;
  float thrust = 0.0f;

  friend bool operator==(const CcFrame&, const CcFrame&) = default;
};

inline constexpr std::size_t kCcFrameSize = 20;
using CcBytes = std::array<Byte, kCcFrameSize>;

namespace detail {
inline bool in_unit_range(float v) { return std::isfinite(v) && v >= -1.0f && v <= 1.0f; }
}  // namespace detail

inline CcBytes encode_cc(const CcFrame& f) {
  for (float v : {f.roll, f.pitch, f.yaw, f.thrust}) {
    if (!detail::in_unit_range(v)) {
      throw WireError(WireErrorKind::kInvalid,
                      "cc frame " + std::to_string(f.frame_id) +
                          ": movement value outside [-1, 1]");
    }
  }
  CcBytes out{};
  put_be<std::uint32_t>(out, 0, f.frame_id);
  put_f32_be(out, 4, f.roll);
  put_f32_be(out, 8, f.pitch);
  put_f32_be(out, 12, f.yaw);
  put_f32_be(out, 16, f.thrust);
  return out;
}

inline CcFrame decode_cc(std::span<const Byte> in) {
  if (in.size() != kCcFrameSize) {
    throw WireError(WireErrorKind::kMalformed,
                    "cc frame must be 20 bytes, got " + std::to_string(in.size()));
  }
  CcFrame f;
  f.frame_id = get_be<std::uint32_t>(in, 0);
  f.roll = get_f32_be(in, 4);
  f.pitch = get_f32_be(in, 8);
  f.yaw = get_f32_be(in, 12);
  f.thrust = get_f32_be(in, 16);
  for (float v : {f.roll, f.pitch, f.yaw, f.thrust}) {
    if (!detail::in_unit_range(v)) {
      throw WireError(WireErrorKind::kCorrupt,
                      "cc frame " + std::to_string(f.frame_id) +
                          ": decoded movement value outside [-1, 1]");
    }
  }
  return f;
}

}  // namespace uavlink::wire
