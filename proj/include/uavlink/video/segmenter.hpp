#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavlink/core/error.hpp"
#include "uavlink/video/encoder.hpp"
#include "uavlink/wire/segment_header.hpp"

namespace uavlink::video {

inline constexpr int kDefaultMtuPayload = 1400;

struct Segment {
  wire::VideoSegmentHeader header;

  // Bytes on the wire: header plus payload.
  std::int64_t wire_bytes() const {
    return static_cast<std::int64_t>(wire::kSegmentHeaderSize) + header.payload_len;
  }
};

inline std::vector<Segment> segmentize(const VideoFrame& frame, int mtu_payload,
                                       std::uint16_t stream_epoch = 0) {
  if (mtu_payload <= 0 || mtu_payload > 0xFFFF) {
    throw Error("segmentize: mtu_payload must be in [1, 65535]");
  }
  const std::int64_t count = std::max<std::int64_t>(1, (frame.size_bytes + mtu_payload - 1) / mtu_payload);
  if (count > 0xFFFF) throw Error("segmentize: frame needs more than 65535 segments");
  std::vector<Segment> out;
  out.reserve(static_cast<std::size_t>(count));
  std::int64_t remaining = frame.size_bytes;
  for (std::int64_t i = 0; i < count; ++i) {
    const auto len = std::min<std::int64_t>(remaining, mtu_payload);
    remaining -= len;
    wire::VideoSegmentHeader h;
    h.stream_epoch = stream_epoch;
    h.frame_seq = frame.frame_seq;
    h.segment_index = static_cast<std::uint16_t>(i);
    h.segment_count = static_cast<std::uint16_t>(count);
    h.capture_ts = static_cast<std::uint64_t>(frame.capture_ts.count());
    h.payload_len = static_cast<std::uint16_t>(len);
    out.push_back({h});
  }
  return out;
}

}  // namespace uavlink::video
