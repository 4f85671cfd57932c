#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gfrsim/sim_time.hpp"

namespace gfrsim {

enum class EventKind : std::uint8_t {
  cell_arrival,
  link_ready,
  timer,
  app_send,
  sample,
  callback,
};

class EventHandler {
 public:
  virtual ~EventHandler() = default;
  virtual void on_event(EventKind kind, std::uint64_t arg) = 0;
};

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventHandler* target = nullptr;
  EventKind kind = EventKind::callback;
  std::uint64_t arg = 0;
};

/// Identifies a scheduled event so it can be cancelled. A default handle
/// refers to nothing.
struct EventHandle {
  std::uint64_t seq = 0;
  explicit operator bool() const { return seq != 0; }
};

/// Single-threaded discrete-event engine. Events fire in (fire_at, seq)
/// order, where seq is assigned at scheduling time.
class Simulator {
 public:
  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }

  /// Throws ModelError if `at` lies before the current clock.
  EventHandle schedule(SimTime at, EventHandler& target, EventKind kind,
                       std::uint64_t arg = 0);
  EventHandle schedule(SimTime at, std::function<void()> fn);

  /// Cancels a pending event. Cancelling an event that already fired is a
  /// no-op as long as the handle was cleared by its owner when it fired.
  void cancel(EventHandle handle);

  /// Processes every event with fire_at <= limit. Afterwards the clock
  /// equals `limit`. Returns the number of events processed.
  std::uint64_t run_until(SimTime limit);

  std::size_t pending() const { return heap_.size() - cancelled_.size(); }
  std::uint64_t processed() const { return processed_; }

  /// FNV-1a digest over (fire_at, kind, arg) of every processed event.
  std::uint64_t trace_hash() const { return hash_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  EventHandle push(Event ev);
  void mix(std::uint64_t v);

  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t processed_ = 0;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
  std::vector<Event> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::unordered_map<std::uint64_t, std::function<void()>> callbacks_;
};

}  // namespace gfrsim
