#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "uavlink/core/time.hpp"
#include "uavlink/wire/beacon.hpp"

namespace uavlink::metrics {

// Instants phase + round(k * 10^6 / rate) for integer k.
class PeriodicGrid {
 public:
  PeriodicGrid(double rate_hz, Usec phase = Usec{0}) : rate_(rate_hz), phase_(phase) {}

  Usec instant(std::int64_t k) const { return phase_ + grid_instant(k, rate_); }

  std::int64_t last_index_before(Usec t) const {
    auto k = static_cast<std::int64_t>(std::floor(static_cast<double>((t - phase_).count()) * rate_ * 1e-6));
    while (instant(k) >= t) --k;
    while (instant(k + 1) < t) ++k;
    return k;
  }

  std::int64_t first_index_at_or_after(Usec t) const { return last_index_before(t) + 1; }

  double rate() const noexcept { return rate_; }
  Usec period_ceil() const { return Usec{static_cast<std::int64_t>(std::ceil(1e6 / rate_))}; }

 private:
  double rate_;
  Usec phase_;
};

// Glass-to-glass measurement chain. The ground display shows its local time
// as a beacon, refreshed at display_refresh_hz. The UAV camera films the
// display; each video frame carries the beacon of the last refresh strictly
// before its capture. A screen sampler on the ground captures the screen at
// sampler_rate_hz and reads the beacon inside the newest displayed video
// frame. Estimate = local time of that screenshot - beacon value.
struct BeaconProbe {
  double display_refresh_hz = 60.0;
  double sampler_rate_hz = 60.0;
  Usec refresh_phase{0};
  Usec sampler_phase{0};

  // Worst-case quantization added on top of the true delay.
  Usec quantization_bound() const {
    return PeriodicGrid(display_refresh_hz).period_ceil() + PeriodicGrid(sampler_rate_hz).period_ceil();
  }
};

struct BeaconFrame {
  Usec capture_true{};
  Usec true_delay{};  // capture to display on the ground screen
};

struct BeaconEstimate {
  Usec capture_true{};
  Usec true_delay{};
  Usec estimate{};
  wire::TimestampBeacon beacon{};

  Usec error() const { return estimate - true_delay; }
};

// Frames are displayed in capture order. A frame replaced on screen before
// any screenshot saw it yields no estimate. ground_local maps true time to
// the ground node's clock reading.
inline std::vector<BeaconEstimate> beacon_estimate(const BeaconProbe& probe,
                                                   const std::vector<BeaconFrame>& trace,
                                                   const std::function<Usec(Usec)>& ground_local) {
  const PeriodicGrid refresh(probe.display_refresh_hz, probe.refresh_phase);
  const PeriodicGrid sampler(probe.sampler_rate_hz, probe.sampler_phase);
  std::vector<BeaconEstimate> out;
  out.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& f = trace[i];
    const Usec shown = f.capture_true + f.true_delay;
    const Usec screenshot = sampler.instant(sampler.first_index_at_or_after(shown));
    if (i + 1 < trace.size()) {
      const Usec replaced = trace[i + 1].capture_true + trace[i + 1].true_delay;
      if (replaced <= screenshot) continue;
    }
    const auto k = refresh.last_index_before(f.capture_true);
    const Usec refreshed_at = refresh.instant(k);
    wire::TimestampBeacon beacon{static_cast<std::uint64_t>(ground_local(refreshed_at).count()),
                                 static_cast<std::uint32_t>(k)};
    const Usec estimate = ground_local(screenshot) - Usec{static_cast<std::int64_t>(beacon.beacon_ts)};
    out.push_back({f.capture_true, f.true_delay, estimate, beacon});
  }
  return out;
}

}  // namespace uavlink::metrics
