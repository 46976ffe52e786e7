#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "uavlink/core/error.hpp"
#include "uavlink/wire/byte_order.hpp"

namespace uavlink::wire {

// Header prepended to every video segment. Wire layout (18 bytes, big-endian):
//
//   0..1   stream_epoch   u16
//   2..5   frame_seq      u32
//   6..7   segment_index  u16
//   8..9   segment_count  u16
//   10..15 capture_ts     u48, sender-local microseconds
//   16..17 payload_len    u16
struct VideoSegmentHeader {
  std::uint16_t stream_epoch = 0;
  std::uint32_t frame_seq = 0;
  std::uint16_t segment_index = 0;
  std::uint16_t segment_count = 1;
  std::uint64_t capture_ts = 0;
  std::uint16_t payload_len = 0;

  bool is_last() const { return segment_index + 1 == segment_count; }

  friend bool operator==(const VideoSegmentHeader&,
                         const VideoSegmentHeader&) = default;
};

inline constexpr std::size_t kSegmentHeaderSize = 18;
inline constexpr std::uint64_t kCaptureTsLimit = std::uint64_t{1} << 48;
using SegmentHeaderBytes = std::array<Byte, kSegmentHeaderSize>;

namespace detail {
// Empty string when valid.
inline std::string segment_header_problem(const VideoSegmentHeader& h) {
  if (h.segment_count == 0) return "segment_count is 0";
  if (h.segment_index >= h.segment_count) return "segment_index >= segment_count";
  if (h.payload_len == 0 && !h.is_last()) return "empty payload before final segment";
  return {};
}
}  // namespace detail

inline SegmentHeaderBytes encode_segment_header(const VideoSegmentHeader& h) {
  if (auto why = detail::segment_header_problem(h); !why.empty()) {
    throw WireError(WireErrorKind::kInvalid, "segment header: " + why);
  }
  if (h.capture_ts >= kCaptureTsLimit) {
    throw WireError(WireErrorKind::kInvalid,
                    "segment header: capture_ts exceeds 48 bits");
  }
  SegmentHeaderBytes out{};
  put_be<std::uint16_t>(out, 0, h.stream_epoch);
  put_be<std::uint32_t>(out, 2, h.frame_seq);
  put_be<std::uint16_t>(out, 6, h.segment_index);
  put_be<std::uint16_t>(out, 8, h.segment_count);
  put_be<std::uint64_t>(out, 10, h.capture_ts, 6);
  put_be<std::uint16_t>(out, 16, h.payload_len);
  return out;
}

inline VideoSegmentHeader decode_segment_header(std::span<const Byte> in) {
  if (in.size() != kSegmentHeaderSize) {
    throw WireError(WireErrorKind::kMalformed,
                    "segment header must be 18 bytes, got " +
                        std::to_string(in.size()));
  }
  VideoSegmentHeader h;
  h.stream_epoch = get_be<std::uint16_t>(in, 0);
  h.frame_seq = get_be<std::uint32_t>(in, 2);
  h.segment_index = get_be<std::uint16_t>(in, 6);
  h.segment_count = get_be<std::uint16_t>(in, 8);
  h.capture_ts = get_be<std::uint64_t>(in, 10, 6);
  h.payload_len = get_be<std::uint16_t>(in, 16);
  if (auto why = detail::segment_header_problem(h); !why.empty()) {
    throw WireError(WireErrorKind::kCorrupt, "segment header: " + why);
  }
  return h;
}

}  // namespace uavlink::wire
