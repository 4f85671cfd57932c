#include "gfrsim/fifo_port.hpp"

#include <numeric>
#include <string>

#include "gfrsim/errors.hpp"

namespace gfrsim {

FifoPort::FifoPort(Simulator& sim, std::string name, const LinkConfig& link,
                   const BufferConfig& buffer, std::unique_ptr<DropPolicy> policy,
                   CellSink* next_hop)
    : sim_(&sim),
      name_(std::move(name)),
      buffer_(buffer),
      policy_(policy ? std::move(policy) : std::make_unique<AcceptAllPolicy>()),
      link_(sim, link, next_hop) {
  if (buffer_.congestion_threshold > buffer_.capacity) {
    throw ConfigError("port " + name_ + ": congestion threshold R exceeds capacity K");
  }
  if (buffer_.capacity == 0) throw ConfigError("port " + name_ + ": zero capacity");
}

void FifoPort::add_vc(VcId vc, const VcParams& params) {
  if (has_vc(vc)) throw ConfigError("port " + name_ + ": VC added twice");
  VcAccount acct;
  acct.vc = vc;
  acct.threshold = params.threshold;
  acct.z = params.z;
  acct.weight = params.weight;
  acct.mcr = params.mcr;
  policy_->validate(acct);
  if (slot_of_.size() <= vc) slot_of_.resize(vc + 1, 0);
  accounts_.push_back(acct);
  slot_of_[vc] = static_cast<std::uint32_t>(accounts_.size());
}

bool FifoPort::has_vc(VcId vc) const { return vc < slot_of_.size() && slot_of_[vc] != 0; }

std::size_t FifoPort::slot(VcId vc) const {
  if (!has_vc(vc)) {
    throw ConfigError("port " + name_ + ": cell for unknown VC " + std::to_string(vc));
  }
  return slot_of_[vc] - 1;
}

const VcAccount& FifoPort::account(VcId vc) const { return accounts_[slot(vc)]; }

void FifoPort::on_cell_arrival(Cell cell) {
  const std::size_t s = slot(cell.vc);
  VcAccount& a = accounts_[s];
  ++stats_.cells_in;

  if (cell.first()) {
    // A frame still open here lost its tail upstream; start fresh.
    a.ppd = false;
    ++a.frames_seen;
    const DropDecision d = policy_->on_first_cell(load(), a, cell);
    if (d == DropDecision::accept_frame) {
      a.frame_state = FrameState::accepting;
    } else {
      a.frame_state = FrameState::discarding;
      ++a.frames_dropped;
      ++stats_.frames_dropped;
    }
  } else if (a.frame_state == FrameState::idle) {
    // Continuation of a frame whose head never reached this port.
    a.frame_state = FrameState::discarding;
    a.ppd = true;
  }

  if (a.frame_state == FrameState::accepting && occupancy_ >= buffer_.capacity) {
    a.frame_state = FrameState::discarding;
    a.ppd = true;
    ++a.frames_truncated;
    ++stats_.frames_truncated;
    ++a.cells_dropped;
    ++stats_.cells_dropped;
    note(cell, CellFate::dropped_overflow);
  } else if (a.frame_state == FrameState::accepting) {
    ++occupancy_;
    ++a.occupancy;
    ++a.cells_enqueued;
    if (a.occupancy > a.max_occupancy) a.max_occupancy = a.occupancy;
    if (occupancy_ > stats_.max_occupancy) stats_.max_occupancy = occupancy_;
    note(cell, CellFate::enqueued);
    const bool eom = cell.eom;
    queue_.emplace_back(static_cast<std::uint32_t>(s), std::move(cell));
    if (eom) a.frame_state = FrameState::idle;
    if (buffer_.check_invariants) check_invariants();
    if (!busy_) start_transmission();
    return;
  } else {
    ++a.cells_dropped;
    ++stats_.cells_dropped;
    note(cell, a.ppd ? CellFate::dropped_ppd : CellFate::dropped_policy);
  }
  if (cell.eom) {
    a.frame_state = FrameState::idle;
    a.ppd = false;
  }
  if (buffer_.check_invariants) check_invariants();
}

void FifoPort::start_transmission() {
  auto [s, cell] = std::move(queue_.front());
  queue_.pop_front();
  VcAccount& a = accounts_[s];
  --occupancy_;
  --a.occupancy;
  policy_->on_dequeue(a);
  ++stats_.cells_out;
  busy_ = true;
  const SimTime done = link_.transmit(std::move(cell));
  sim_->schedule(done, *this, EventKind::link_ready);
  if (buffer_.check_invariants) check_invariants();
}

void FifoPort::on_event(EventKind /*kind*/, std::uint64_t /*arg*/) {
  busy_ = false;
  if (!queue_.empty()) start_transmission();
}

void FifoPort::check_invariants() const {
  const std::uint64_t sum = std::accumulate(
      accounts_.begin(), accounts_.end(), std::uint64_t{0},
      [](std::uint64_t acc, const VcAccount& a) { return acc + a.occupancy; });
  GFRSIM_ASSERT(sum == occupancy_, "port " + name_ + ": X != sum of X_i");
  GFRSIM_ASSERT(queue_.size() == occupancy_, "port " + name_ + ": X != queue length");
  GFRSIM_ASSERT(occupancy_ <= buffer_.capacity, "port " + name_ + ": X > K");
}

}  // namespace gfrsim
