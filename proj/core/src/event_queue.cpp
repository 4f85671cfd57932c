#include "gfrsim/event_queue.hpp"

#include <algorithm>
#include <string>

#include "gfrsim/errors.hpp"

namespace gfrsim {

void throw_model_error(const std::string& what) { throw ModelError(what); }

EventHandle Simulator::schedule(SimTime at, EventHandler& target,
                                EventKind kind, std::uint64_t arg) {
  return push(Event{at, 0, &target, kind, arg});
}

EventHandle Simulator::schedule(SimTime at, std::function<void()> fn) {
  EventHandle h = push(Event{at, 0, nullptr, EventKind::callback, 0});
  callbacks_.emplace(h.seq, std::move(fn));
  return h;
}

EventHandle Simulator::push(Event ev) {
  if (ev.fire_at < now_) {
    throw ModelError("event scheduled in the past: at " +
                     std::to_string(ev.fire_at.ns()) + " ns, clock " +
                     std::to_string(now_.ns()) + " ns");
  }
  ev.seq = next_seq_++;
  heap_.push_back(ev);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return EventHandle{ev.seq};
}

void Simulator::cancel(EventHandle handle) {
  if (!handle || handle.seq >= next_seq_) return;
  cancelled_.insert(handle.seq);
  callbacks_.erase(handle.seq);
}

void Simulator::mix(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    hash_ ^= (v >> (8 * i)) & 0xffU;
    hash_ *= 0x100000001b3ULL;
  }
}

std::uint64_t Simulator::run_until(SimTime limit) {
  std::uint64_t count = 0;
  while (!heap_.empty() && heap_.front().fire_at <= limit) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event ev = heap_.back();
    heap_.pop_back();
    if (!cancelled_.empty()) {
      if (auto it = cancelled_.find(ev.seq); it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
    }
    now_ = ev.fire_at;
    ++count;
    ++processed_;
    mix(static_cast<std::uint64_t>(ev.fire_at.ns()));
    mix((static_cast<std::uint64_t>(ev.kind) << 56) ^ ev.arg);
    if (ev.target != nullptr) {
      ev.target->on_event(ev.kind, ev.arg);
    } else {
      auto node = callbacks_.extract(ev.seq);
      if (!node.empty()) node.mapped()();
    }
  }
  if (now_ < limit) now_ = limit;
  return count;
}

}  // namespace gfrsim
