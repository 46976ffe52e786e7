#pragma once

#include <cmath>
#include <cstdlib>

#include "uavlink/core/time.hpp"
#include "uavlink/sim/event_queue.hpp"
#include "uavlink/sim/rng.hpp"

namespace uavlink::sim {

// A node's view of time: an offset at the last sync plus a linear drift.
struct NodeClock {
  Usec true_offset{0};
  double drift_ppm = 0.0;
  Usec last_sync{0};
  Usec sync_interval{10'000'000};
  Usec max_residual_error{1'000};

  // Bound on |local - true| at any instant under periodic sync.
  Usec error_bound() const {
    return max_residual_error +
           Usec{static_cast<std::int64_t>(std::ceil(
               std::abs(drift_ppm) * static_cast<double>(sync_interval.count()) *
               1e-6))};
  }
};

inline Usec local_now(const NodeClock& clock, Usec t_true) {
  const double elapsed = static_cast<double>((t_true - clock.last_sync).count());
  const auto drift = static_cast<std::int64_t>(
      std::floor(clock.drift_ppm * elapsed * 1e-6));
  return t_true + clock.true_offset + Usec{drift};
}

// NTP-style correction: the offset collapses to a residual drawn uniformly
// from [-max_residual_error, +max_residual_error].
inline NodeClock ntp_sync(NodeClock clock, Usec t_true, SeededRng& rng) {
  const auto bound = clock.max_residual_error.count();
  clock.true_offset = Usec{rng.uniform_int(-bound, bound)};
  clock.last_sync = t_true;
  return clock;
}

// Keeps a clock synced every sync_interval on a simulator. The rng stream is
// owned by the service so that nodes draw independently.
class ClockSyncService {
 public:
  ClockSyncService(Simulator& sim, NodeClock& clock, SeededRng rng)
      : sim_(sim), clock_(clock), rng_(std::move(rng)) {}

  // Syncs at `at` and every sync_interval thereafter.
  void start(Usec at) {
    sim_.schedule(at, [this] { tick(); });
  }

  void stop() { stopped_ = true; }
  std::uint64_t sync_count() const noexcept { return syncs_; }

 private:
  void tick() {
    if (stopped_) return;
    clock_ = ntp_sync(clock_, sim_.now(), rng_);
    ++syncs_;
    sim_.schedule(sim_.now() + clock_.sync_interval, [this] { tick(); });
  }

  Simulator& sim_;
  NodeClock& clock_;
  SeededRng rng_;
  std::uint64_t syncs_ = 0;
  bool stopped_ = false;
};

}  // namespace uavlink::sim
