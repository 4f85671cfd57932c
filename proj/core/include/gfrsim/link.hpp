#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <utility>

#include "gfrsim/aal5.hpp"
#include "gfrsim/event_queue.hpp"
#include "gfrsim/sim_time.hpp"

namespace gfrsim {

inline constexpr std::uint64_t kOc3RateBps = 155'520'000;

struct LinkConfig {
  std::uint64_t rate_bps = kOc3RateBps;
  SimTime prop_delay;

  /// Nominal (unrounded) cell transmission time in seconds.
  double cell_time_seconds() const {
    return static_cast<double>(kCellWireBits) / static_cast<double>(rate_bps);
  }
};

class CellSink {
 public:
  virtual ~CellSink() = default;
  virtual void receive_cell(Cell cell) = 0;
};

/// Point-to-point cell link. Serialization times are exact on average: the
/// sub-nanosecond remainder of each cell time carries into the next one.
/// Cells in flight are kept in arrival order so only the head needs a
/// pending event.
class Link : public EventHandler {
 public:
  Link(Simulator& sim, const LinkConfig& cfg, CellSink* sink);

  /// Starts sending `cell` at the current time. Returns the time its last
  /// bit leaves the sender.
  SimTime transmit(Cell cell);

  void set_sink(CellSink* sink) { sink_ = sink; }
  void set_tap(std::function<void(const Cell&)> tap) { tap_ = std::move(tap); }

  const LinkConfig& config() const { return cfg_; }
  std::uint64_t cells_sent() const { return cells_sent_; }

  void on_event(EventKind kind, std::uint64_t arg) override;

 private:
  Simulator* sim_;
  LinkConfig cfg_;
  CellSink* sink_;
  std::function<void(const Cell&)> tap_;
  std::deque<std::pair<SimTime, Cell>> in_flight_;
  std::uint64_t residue_ = 0;
  std::uint64_t cells_sent_ = 0;
};

}  // namespace gfrsim
