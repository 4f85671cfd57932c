#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfrsim/aal5.hpp"
#include "gfrsim/fifo_port.hpp"
#include "gfrsim/link.hpp"

namespace gfrsim {

/// Watches the cell fates of one FifoPort. Every frame must be wholly
/// enqueued, wholly refused at its first cell, or enqueued up to an overflow
/// at X == K followed only by partial-discard drops.
class FrameAtomicityChecker {
 public:
  explicit FrameAtomicityChecker(FifoPort& port);
  FrameAtomicityChecker(const FrameAtomicityChecker&) = delete;
  FrameAtomicityChecker& operator=(const FrameAtomicityChecker&) = delete;

  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t frames_whole() const { return whole_; }
  std::uint64_t frames_refused() const { return refused_; }
  std::uint64_t frames_cut() const { return cut_; }

 private:
  enum class Phase : std::uint8_t { enqueuing, refused, cut };
  struct Open {
    FrameId frame = 0;
    Phase phase = Phase::enqueuing;
  };

  void observe(const Cell& cell, CellFate fate, std::uint32_t occupancy);
  void fail(const Cell& cell, const std::string& why);

  std::uint32_t capacity_;
  std::unordered_map<VcId, Open> open_;
  std::vector<std::string> violations_;
  std::uint64_t whole_ = 0;
  std::uint64_t refused_ = 0;
  std::uint64_t cut_ = 0;
};

/// Taps a link and requires the cells of each VC to form whole frames in
/// index order, one frame at a time.
class InterleavingChecker {
 public:
  explicit InterleavingChecker(Link& link);
  InterleavingChecker(const InterleavingChecker&) = delete;
  InterleavingChecker& operator=(const InterleavingChecker&) = delete;

  const std::vector<std::string>& violations() const { return violations_; }
  std::uint64_t frames_checked() const { return frames_; }

 private:
  struct Open {
    FrameId frame = 0;
    std::uint32_t next_index = 0;
  };

  void observe(const Cell& cell);

  std::unordered_map<VcId, Open> open_;
  std::vector<std::string> violations_;
  std::uint64_t frames_ = 0;
};

}  // namespace gfrsim
