#include "gfrsim/link.hpp"

#include "gfrsim/errors.hpp"

namespace gfrsim {

Link::Link(Simulator& sim, const LinkConfig& cfg, CellSink* sink)
    : sim_(&sim), cfg_(cfg), sink_(sink) {
  if (cfg_.rate_bps == 0) throw ConfigError("link: rate must be positive");
  if (cfg_.prop_delay < SimTime{}) throw ConfigError("link: negative propagation delay");
}

SimTime Link::transmit(Cell cell) {
  const std::uint64_t scaled = std::uint64_t{kCellWireBits} * 1'000'000'000ULL + residue_;
  const std::uint64_t ticks = scaled / cfg_.rate_bps;
  residue_ = scaled % cfg_.rate_bps;
  const SimTime done = sim_->now() + SimTime::from_ns(static_cast<std::int64_t>(ticks));
  const SimTime arrive = done + cfg_.prop_delay;
  ++cells_sent_;
  const bool idle = in_flight_.empty();
  in_flight_.emplace_back(arrive, std::move(cell));
  if (idle) sim_->schedule(arrive, *this, EventKind::cell_arrival);
  return done;
}

void Link::on_event(EventKind /*kind*/, std::uint64_t /*arg*/) {
  GFRSIM_ASSERT(!in_flight_.empty(), "link: arrival event with nothing in flight");
  Cell cell = std::move(in_flight_.front().second);
  in_flight_.pop_front();
  if (!in_flight_.empty()) {
    sim_->schedule(in_flight_.front().first, *this, EventKind::cell_arrival);
  }
  if (tap_) tap_(cell);
  if (sink_ != nullptr) sink_->receive_cell(std::move(cell));
}

}  // namespace gfrsim
