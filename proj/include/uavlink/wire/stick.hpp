#pragma once

#include <algorithm>
#include <cstdint>

namespace uavlink::wire {

// Maps a signed 16-bit joystick axis onto [-1, 1]. The two half-ranges have
// different lengths, so each side is scaled separately to hit both ends
// exactly.
inline float normalize_stick(std::int16_t raw) {
  const float v = raw >= 0 ? static_cast<float>(raw) / 32767.0f
                           : static_cast<float>(raw) / 32768.0f;
  return std::clamp(v, -1.0f, 1.0f);
}

}  // namespace uavlink::wire
