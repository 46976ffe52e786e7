#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"

namespace uavlink::sim {

// Identifies a scheduled event; used for cancellation.
struct EventHandle {
  Usec time{};
  std::uint64_t seq = 0;

  friend auto operator<=>(const EventHandle&, const EventHandle&) = default;
};

// Time-ordered event queue. Equal-time events leave in insertion order.
template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    EventHandle handle;
    Payload payload;
  };

  Usec now() const noexcept { return now_; }
  bool empty() const noexcept { return pending_.empty(); }
  std::size_t size() const noexcept { return pending_.size(); }

  EventHandle schedule(Usec t, Payload payload) {
    if (t < now_) {
      throw CausalityError("causality violation: event at " +
                           std::to_string(t.count()) + " us scheduled at " +
                           std::to_string(now_.count()) + " us");
    }
    const EventHandle h{t, next_seq_++};
    pending_.emplace(h, std::move(payload));
    return h;
  }

  // Returns false if the event already fired or was cancelled.
  bool cancel(const EventHandle& h) { return pending_.erase(h) > 0; }

  std::optional<Usec> next_time() const {
    if (pending_.empty()) return std::nullopt;
    return pending_.begin()->first.time;
  }

  // Removes the earliest event and advances the clock to its time.
  Entry pop() {
    auto node = pending_.extract(pending_.begin());
    now_ = node.key().time;
    return Entry{node.key(), std::move(node.mapped())};
  }

  // Advances the clock without dispatching; t must not skip pending events.
  void advance_to(Usec t) {
    if (t > now_) now_ = t;
  }

 private:
  std::map<EventHandle, Payload> pending_;
  std::uint64_t next_seq_ = 0;
  Usec now_{0};
};

// Callback-driven scheduler owning one EventQueue.
class Simulator {
 public:
  using Action = std::function<void()>;
  using Tracer = std::function<void(const EventHandle&)>;

  Usec now() const noexcept { return queue_.now(); }
  std::size_t pending() const noexcept { return queue_.size(); }
  std::uint64_t dispatched() const noexcept { return dispatched_; }

  EventHandle schedule(Usec t, Action action) {
    return queue_.schedule(t, std::move(action));
  }

  EventHandle schedule_in(Usec delay, Action action) {
    return queue_.schedule(now() + delay, std::move(action));
  }

  bool cancel(const EventHandle& h) { return queue_.cancel(h); }

  void set_tracer(Tracer tracer) { tracer_ = std::move(tracer); }

  // Dispatches every event with time <= t_end, including events scheduled by
  // handlers inside the horizon. The clock ends at t_end if later events are
  // still pending, otherwise at the last dispatched event.
  std::size_t run_until(Usec t_end) {
    std::size_t count = 0;
    while (auto t = queue_.next_time()) {
      if (*t > t_end) {
        queue_.advance_to(t_end);
        break;
      }
      auto entry = queue_.pop();
      if (tracer_) tracer_(entry.handle);
      entry.payload();
      ++count;
      ++dispatched_;
    }
    return count;
  }

 private:
  EventQueue<Action> queue_;
  Tracer tracer_;
  std::uint64_t dispatched_ = 0;
};

}  // namespace uavlink::sim
