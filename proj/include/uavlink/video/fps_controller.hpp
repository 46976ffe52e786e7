#pragma once

#include <algorithm>
#include <string>

#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"

namespace uavlink::video {

// Additive-increase / multiplicative-decrease on the capture rate, evaluated
// once per feedback window.
struct FpsControllerConfig {
  double min_fps = 1.0;
  double max_fps = 30.0;
  double initial_fps = 30.0;
  double increase_step = 0.25;
  double decrease_factor = 0.9;
  double loss_threshold = 0.02;
  Usec delay_threshold{1'000'000};
  Usec window{1'000'000};
};

struct FpsFeedback {
  double segment_loss_fraction = 0.0;
  Usec mean_frame_delay{0};
};

inline void validate(const FpsControllerConfig& c) {
  auto fail = [](const std::string& what) {
    throw ConfigError(ConfigErrorKind::kValidation, "fps controller: " + what);
  };
  if (!(c.min_fps > 0.0)) fail("min_fps must be > 0");
  if (!(c.min_fps <= c.max_fps)) fail("min_fps must be <= max_fps");
  if (!(c.initial_fps >= c.min_fps && c.initial_fps <= c.max_fps)) fail("initial_fps outside [min_fps, max_fps]");
  if (!(c.increase_step >= 0.0)) fail("increase_step must be >= 0");
  if (!(c.decrease_factor > 0.0 && c.decrease_factor < 1.0)) fail("decrease_factor must be in (0, 1)");
  if (!(c.loss_threshold >= 0.0 && c.loss_threshold <= 1.0)) fail("loss_threshold must be in [0, 1]");
  if (c.window <= kZero) fail("window must be > 0");
}

inline double adapt_fps(const FpsControllerConfig& c, double fps, const FpsFeedback& fb) {
  const bool congested =
      fb.segment_loss_fraction > c.loss_threshold || fb.mean_frame_delay > c.delay_threshold;
  const double next = congested ? fps * c.decrease_factor : fps + c.increase_step;
  return std::clamp(next, c.min_fps, c.max_fps);
}

class FpsController {
 public:
  explicit FpsController(FpsControllerConfig cfg) : cfg_(cfg), fps_(cfg.initial_fps) {}

  double fps() const noexcept { return fps_; }
  const FpsControllerConfig& config() const noexcept { return cfg_; }

  double update(const FpsFeedback& fb) {
    fps_ = adapt_fps(cfg_, fps_, fb);
    return fps_;
  }

 private:
  FpsControllerConfig cfg_;
  double fps_;
};

}  // namespace uavlink::video
