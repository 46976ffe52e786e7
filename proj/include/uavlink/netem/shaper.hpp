#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>

#include "uavlink/core/time.hpp"

namespace uavlink::netem {

// Token-bucket shaper in front of a FIFO with a byte limit (tail drop).
//
// Service is computed analytically at admission: a packet starts service at
// max(arrival, previous departure), takes whatever tokens are banked, and
// waits (missing bits) / rate for the rest. With bucket_depth = 0 this is a
// plain rate serializer: departure = max(t, prev) + bits / rate.
class Shaper {
 public:
  Shaper(double rate_bps, std::int64_t queue_limit_bytes, double bucket_depth_bits = 0.0)
      : rate_(rate_bps), depth_(bucket_depth_bits), queue_limit_(queue_limit_bytes),
        tokens_(bucket_depth_bits) {}

  void set_rate(double rate_bps) { rate_ = rate_bps; }
  double rate() const noexcept { return rate_; }
  double tokens() const noexcept { return tokens_; }
  double bucket_depth() const noexcept { return depth_; }
  std::int64_t queue_limit() const noexcept { return queue_limit_; }

  // Bytes admitted but not yet departed as of t.
  std::int64_t queued_bytes(Usec t) {
    release(t);
    return queued_bytes_;
  }

  // Departure time, or nullopt when the packet is tail-dropped.
  std::optional<Usec> admit(std::int64_t pkt_bytes, Usec t) {
    release(t);
    if (rate_ <= 0.0 || queued_bytes_ + pkt_bytes > queue_limit_) {
      ++dropped_;
      return std::nullopt;
    }
    const double now = static_cast<double>(t.count());
    const double start = std::max(now, last_departure_);
    tokens_ = std::min(depth_, tokens_ + rate_ * (start - last_departure_) * 1e-6);
    const double bits = static_cast<double>(pkt_bytes) * 8.0;
    double departure = start;
    if (tokens_ >= bits) {
      tokens_ -= bits;
    } else {
      departure += (bits - tokens_) / rate_ * 1e6;
      tokens_ = 0.0;
    }
    last_departure_ = departure;
    const Usec dep{static_cast<std::int64_t>(std::ceil(departure - 1e-6))};
    in_service_.push_back({dep, pkt_bytes});
    queued_bytes_ += pkt_bytes;
    ++admitted_;
    return dep;
  }

  std::uint64_t admitted() const noexcept { return admitted_; }
  std::uint64_t dropped() const noexcept { return dropped_; }

 private:
  struct Pending {
    Usec departure;
    std::int64_t bytes;
  };

  void release(Usec t) {
    while (!in_service_.empty() && in_service_.front().departure <= t) {
      queued_bytes_ -= in_service_.front().bytes;
      in_service_.pop_front();
    }
  }

  double rate_;
  double depth_;
  std::int64_t queue_limit_;
  double tokens_;
  double last_departure_ = -1e300;
  std::deque<Pending> in_service_;
  std::int64_t queued_bytes_ = 0;
  std::uint64_t admitted_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace uavlink::netem
