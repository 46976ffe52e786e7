#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "uavlink/cc/sender.hpp"
#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/metrics/aggregate.hpp"

namespace uavlink::metrics {

// Two clocks, each within 1 ms of true time after sync.
inline constexpr Usec kCombinedSyncBound{2'000};

// D_CC = T_Cr - T_Ct. nullopt when the difference is negative by more than
// the combined sync bound (a clock anomaly rather than a delay).
inline std::optional<Usec> cc_delay(Usec t_ct, Usec t_cr, Usec anomaly_bound = kCombinedSyncBound) {
  const Usec d = t_cr - t_ct;
  if (d < -anomaly_bound) return std::nullopt;
  return d;
}

// R_CC = N_rece / N_trans.
inline double reliability(std::uint64_t n_rece, std::uint64_t n_trans) {
  if (n_trans == 0) throw MetricError("reliability: no frames transmitted");
  if (n_rece > n_trans) throw MetricError("reliability: more frames received than transmitted");
  return static_cast<double>(n_rece) / static_cast<double>(n_trans);
}

struct CcStats {
  std::vector<std::int64_t> delays_us;  // per matched frame, in rx order
  std::optional<Summary> delay;         // absent if nothing matched
  std::uint64_t n_trans = 0;
  std::uint64_t n_rece = 0;
  double reliability = 0.0;
  std::uint64_t anomalies = 0;
  std::uint64_t unmatched_rx = 0;
};

// Joins the rx log onto the tx log by frame_id and computes the delay
// series and reliability. Only matched pairs contribute delays.
inline CcStats cc_stats(const std::vector<cc::CcLogEntry>& tx, const std::vector<cc::CcLogEntry>& rx,
                        Usec anomaly_bound = kCombinedSyncBound) {
  CcStats s;
  s.n_trans = tx.size();
  std::unordered_map<std::uint32_t, Usec> sent;
  sent.reserve(tx.size());
  for (const auto& e : tx) sent.emplace(e.frame_id, e.timestamp);
  for (const auto& e : rx) {
    auto it = sent.find(e.frame_id);
    if (it == sent.end()) {
      ++s.unmatched_rx;
      continue;
    }
    ++s.n_rece;
    if (auto d = cc_delay(it->second, e.timestamp, anomaly_bound)) {
      s.delays_us.push_back(d->count());
    } else {
      ++s.anomalies;
    }
  }
  if (!s.delays_us.empty()) s.delay = aggregate(s.delays_us);
  s.reliability = reliability(s.n_rece, s.n_trans);
  return s;
}

}  // namespace uavlink::metrics
