#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "uavlink/core/time.hpp"

namespace uavlink::cc {

// Raw joystick axes as read from the controller.
struct StickSample {
  std::int16_t roll = 0;
  std::int16_t pitch = 0;
  std::int16_t yaw = 0;
  std::int16_t thrust = 0;

  friend bool operator==(const StickSample&, const StickSample&) = default;
};

class StickSource {
 public:
  virtual ~StickSource() = default;
  // nullopt once the source is exhausted.
  virtual std::optional<StickSample> next(Usec t) = 0;
};

class ConstantStick final : public StickSource {
 public:
  explicit ConstantStick(StickSample value = {}) : value_(value) {}
  std::optional<StickSample> next(Usec) override { return value_; }

 private:
  StickSample value_;
};

// Sinusoid per axis: raw = amplitude * sin(2 pi f t + phase).
class WaveformStick final : public StickSource {
 public:
  struct Axis {
    double amplitude = 0.0;  // raw units, |amplitude| <= 32767
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
  };

  WaveformStick(Axis roll, Axis pitch, Axis yaw, Axis thrust)
      : axes_{roll, pitch, yaw, thrust} {}

  std::optional<StickSample> next(Usec t) override {
    const double s = to_seconds(t);
    auto eval = [s](const Axis& a) {
      const double v = a.amplitude * std::sin(2.0 * std::numbers::pi * a.frequency_hz * s + a.phase_rad);
      return static_cast<std::int16_t>(std::clamp(std::lround(v), -32768L, 32767L));
    };
    return StickSample{eval(axes_[0]), eval(axes_[1]), eval(axes_[2]), eval(axes_[3])};
  }

 private:
  Axis axes_[4];
};

// Replays a recorded sequence, one sample per call.
class TraceStick final : public StickSource {
 public:
  explicit TraceStick(std::vector<StickSample> samples) : samples_(std::move(samples)) {}

  std::optional<StickSample> next(Usec) override {
    if (pos_ >= samples_.size()) return std::nullopt;
    return samples_[pos_++];
  }

 private:
  std::vector<StickSample> samples_;
  std::size_t pos_ = 0;
};

}  // namespace uavlink::cc
