#include "gfrsim/checks.hpp"

namespace gfrsim {

namespace {
constexpr std::size_t kMaxReported = 32;
}

FrameAtomicityChecker::FrameAtomicityChecker(FifoPort& port)
    : capacity_(port.buffer().capacity) {
  port.set_observer([this](const Cell& c, CellFate f, std::uint32_t x) { observe(c, f, x); });
}

void FrameAtomicityChecker::fail(const Cell& cell, const std::string& why) {
  if (violations_.size() < kMaxReported) {
    violations_.push_back("vc " + std::to_string(cell.vc) + " frame " +
                          std::to_string(cell.frame_id()) + " cell " +
                          std::to_string(cell.index) + ": " + why);
  }
}

void FrameAtomicityChecker::observe(const Cell& cell, CellFate fate, std::uint32_t occupancy) {
  auto it = open_.find(cell.vc);
  if (cell.first()) {
    if (it != open_.end() && it->second.phase != Phase::cut) {
      fail(cell, "previous frame ended without its last cell");
    }
    Phase phase = Phase::enqueuing;
    switch (fate) {
      case CellFate::enqueued: break;
      case CellFate::dropped_policy: phase = Phase::refused; break;
      case CellFate::dropped_overflow:
        if (occupancy < capacity_) fail(cell, "overflow drop below capacity");
        phase = Phase::cut;
        break;
      case CellFate::dropped_ppd: fail(cell, "partial discard on a first cell"); break;
    }
    it = open_.insert_or_assign(cell.vc, Open{cell.frame_id(), phase}).first;
  } else {
    if (it == open_.end() || it->second.frame != cell.frame_id()) {
      fail(cell, "continuation cell of a frame never opened");
      return;
    }
    Phase& phase = it->second.phase;
    switch (phase) {
      case Phase::enqueuing:
        if (fate == CellFate::dropped_overflow) {
          if (occupancy < capacity_) fail(cell, "overflow drop below capacity");
          phase = Phase::cut;
        } else if (fate != CellFate::enqueued) {
          fail(cell, "frame accepted at its first cell lost a cell without overflow");
        }
        break;
      case Phase::refused:
        if (fate != CellFate::dropped_policy) fail(cell, "refused frame had a cell admitted");
        break;
      case Phase::cut:
        if (fate != CellFate::dropped_ppd) fail(cell, "cell admitted after partial discard began");
        break;
    }
  }
  if (cell.eom) {
    switch (it->second.phase) {
      case Phase::enqueuing: ++whole_; break;
      case Phase::refused: ++refused_; break;
      case Phase::cut: ++cut_; break;
    }
    open_.erase(it);
  }
}

InterleavingChecker::InterleavingChecker(Link& link) {
  link.set_tap([this](const Cell& c) { observe(c); });
}

void InterleavingChecker::observe(const Cell& cell) {
  auto report = [&](const std::string& why) {
    if (violations_.size() < kMaxReported) {
      violations_.push_back("vc " + std::to_string(cell.vc) + " frame " +
                            std::to_string(cell.frame_id()) + ": " + why);
    }
  };
  auto it = open_.find(cell.vc);
  if (it == open_.end()) {
    if (!cell.first()) report("frame starts mid-way");
    it = open_.emplace(cell.vc, Open{cell.frame_id(), 0}).first;
  } else if (it->second.frame != cell.frame_id()) {
    report("interleaved with frame " + std::to_string(it->second.frame));
    it->second = Open{cell.frame_id(), cell.index};
  }
  if (cell.index != it->second.next_index) report("cell index out of order");
  it->second.next_index = cell.index + 1;
  if (cell.eom) {
    if (cell.index + 1 != cell.frame->cell_count) report("frame length mismatch");
    ++frames_;
    open_.erase(it);
  }
}

}  // namespace gfrsim
