#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "uavlink/core/error.hpp"
#include "uavlink/wire/byte_order.hpp"

namespace uavlink::wire {

// Displayed timestamp (stands in for the on-screen QR code).
// Wire layout (12 bytes, big-endian): beacon_ts u64, refresh_seq u32.
struct TimestampBeacon {
  std::uint64_t beacon_ts = 0;
  std::uint32_t refresh_seq = 0;

  friend bool operator==(const TimestampBeacon&, const TimestampBeacon&) = default;
};

inline constexpr std::size_t kBeaconSize = 12;
using BeaconBytes = std::array<Byte, kBeaconSize>;

inline BeaconBytes encode_beacon(const TimestampBeacon& b) {
  BeaconBytes out{};
  put_be<std::uint64_t>(out, 0, b.beacon_ts);
  put_be<std::uint32_t>(out, 8, b.refresh_seq);
  return out;
}

inline TimestampBeacon decode_beacon(std::span<const Byte> in) {
  if (in.size() != kBeaconSize) {
    throw WireError(WireErrorKind::kMalformed,
                    "beacon must be 12 bytes, got " + std::to_string(in.size()));
  }
  return {get_be<std::uint64_t>(in, 0), get_be<std::uint32_t>(in, 8)};
}

}  // namespace uavlink::wire
