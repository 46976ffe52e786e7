#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "uavlink/core/time.hpp"
#include "uavlink/video/encoder.hpp"
#include "uavlink/wire/segment_header.hpp"

namespace uavlink::video {

struct CompletedFrame {
  VideoFrame frame;  // fps is not carried on the wire and stays 0
  Usec display_local{};  // T_Vr
};

struct LostFrame {
  std::uint32_t frame_seq = 0;
  // 0 when no segment of the frame ever arrived.
  std::uint16_t segment_count = 0;
  std::uint16_t segments_received = 0;
};

struct ReassemblyOutcome {
  enum class Kind { kPending, kCompleted, kDuplicate };
  Kind kind = Kind::kPending;
  std::optional<CompletedFrame> completed;
};

struct ReassemblerCounters {
  std::uint64_t segments_received = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t frames_completed = 0;
  std::uint64_t frames_lost = 0;
};

// Ground-side frame reassembly. A frame completes when all of its segments
// have arrived. Once a segment of a newer frame arrives, every older
// unfinished frame (including frames never seen at all) gets a deadline of
// gap_timeout; past it the frame is declared lost. There is no
// retransmission.
class Reassembler {
 public:
  explicit Reassembler(Usec gap_timeout = Usec{500'000}, Usec display_latency = Usec{0})
      : gap_timeout_(gap_timeout), display_latency_(display_latency) {}

  ReassemblyOutcome on_segment(const wire::VideoSegmentHeader& h, Usec t_true, Usec t_local) {
    if (resolved_.contains(h.frame_seq)) {
      ++counters_.duplicates;
      return {ReassemblyOutcome::Kind::kDuplicate, std::nullopt};
    }
    note_gap_up_to(h.frame_seq);
    for (auto& [seq, older] : pending_) {
      if (seq >= h.frame_seq) break;
      if (!older.deadline) older.deadline = t_true + gap_timeout_;
    }
    auto& p = pending_[h.frame_seq];
    if (p.received.empty()) {
      p.received.assign(h.segment_count, false);
      p.capture_ts = Usec{static_cast<std::int64_t>(h.capture_ts)};
    }
    if (h.segment_index >= p.received.size() || p.received[h.segment_index]) {
      ++counters_.duplicates;
      return {ReassemblyOutcome::Kind::kDuplicate, std::nullopt};
    }
    p.received[h.segment_index] = true;
    ++p.count;
    p.bytes += h.payload_len;
    ++counters_.segments_received;
    if (p.count < p.received.size()) return {ReassemblyOutcome::Kind::kPending, std::nullopt};

    CompletedFrame done{{h.frame_seq, p.capture_ts, p.bytes, 0.0}, t_local + display_latency_};
    pending_.erase(h.frame_seq);
    resolved_.emplace(h.frame_seq, true);
    ++counters_.frames_completed;
    return {ReassemblyOutcome::Kind::kCompleted, done};
  }

  // Declares lost every pending frame whose deadline is <= t_true.
  std::vector<LostFrame> expire(Usec t_true) {
    std::vector<LostFrame> lost;
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (it->second.deadline && *it->second.deadline <= t_true) {
        lost.push_back(to_lost(it->first, it->second));
        resolved_.emplace(it->first, false);
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
    counters_.frames_lost += lost.size();
    return lost;
  }

  // End of session: everything unfinished is lost.
  std::vector<LostFrame> finalize() {
    for (auto& [seq, p] : pending_) p.deadline = Usec::min();
    return expire(Usec::min());
  }

  std::optional<Usec> next_deadline() const {
    std::optional<Usec> best;
    for (const auto& [seq, p] : pending_) {
      if (p.deadline && (!best || *p.deadline < *best)) best = p.deadline;
    }
    return best;
  }

  std::size_t pending_frames() const noexcept { return pending_.size(); }
  const ReassemblerCounters& counters() const noexcept { return counters_; }

 private:
  struct Pending {
    std::vector<bool> received;  // empty until the first segment arrives
    std::size_t count = 0;
    std::int64_t bytes = 0;
    Usec capture_ts{};
    std::optional<Usec> deadline;
  };

  static LostFrame to_lost(std::uint32_t seq, const Pending& p) {
    return {seq, static_cast<std::uint16_t>(p.received.size()), static_cast<std::uint16_t>(p.count)};
  }

  // Frames skipped entirely become placeholders so they can be declared lost.
  void note_gap_up_to(std::uint32_t seq) {
    if (!highest_seen_ || seq > *highest_seen_) {
      const std::uint32_t from = highest_seen_ ? *highest_seen_ + 1 : 0;
      for (std::uint32_t s = from; s < seq; ++s) {
        if (!resolved_.contains(s)) pending_.try_emplace(s);
      }
      highest_seen_ = seq;
    }
  }

  Usec gap_timeout_;
  Usec display_latency_;
  std::map<std::uint32_t, Pending> pending_;
  std::map<std::uint32_t, bool> resolved_;
  std::optional<std::uint32_t> highest_seen_;
  ReassemblerCounters counters_{};
};

}  // namespace uavlink::video
