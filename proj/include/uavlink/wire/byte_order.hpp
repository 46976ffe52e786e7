#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

namespace uavlink::wire {

using Byte = std::uint8_t;

// Big-endian field writers/readers over a fixed-size buffer. Callers check
// lengths; these do not.

template <typename T>
inline void put_be(std::span<Byte> out, std::size_t offset, T value,
                   std::size_t width = sizeof(T)) {
  for (std::size_t i = 0; i < width; ++i) {
    out[offset + i] =
        static_cast<Byte>(static_cast<std::uint64_t>(value) >> (8 * (width - 1 - i)));
  }
}

template <typename T>
inline T get_be(std::span<const Byte> in, std::size_t offset,
                std::size_t width = sizeof(T)) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 8) | in[offset + i];
  return static_cast<T>(v);
}

inline void put_f32_be(std::span<Byte> out, std::size_t offset, float value) {
  put_be<std::uint32_t>(out, offset, std::bit_cast<std::uint32_t>(value));
}

inline float get_f32_be(std::span<const Byte> in, std::size_t offset) {
  return std::bit_cast<float>(get_be<std::uint32_t>(in, offset));
}

}  // namespace uavlink::wire
