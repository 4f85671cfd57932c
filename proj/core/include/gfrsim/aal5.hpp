#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gfrsim/tcp.hpp"
#include "gfrsim/types.hpp"

namespace gfrsim {

inline constexpr std::uint32_t kCellPayloadBytes = 48;
inline constexpr std::uint32_t kCellWireBytes = 53;
inline constexpr std::uint32_t kCellWireBits = kCellWireBytes * 8;
inline constexpr std::uint32_t kAal5TrailerBytes = 8;
inline constexpr std::uint32_t kTcpIpHeaderBytes = 40;

/// Number of cells an AAL5 frame with `frame_len` bytes of payload needs.
constexpr std::uint32_t cells_for_frame(std::uint32_t frame_len) {
  return (frame_len + kAal5TrailerBytes + kCellPayloadBytes - 1) / kCellPayloadBytes;
}

/// One AAL5 PDU carrying one TCP/IP packet.
struct Frame {
  FrameId id = 0;
  VcId vc = 0;  // VC the frame was segmented onto
  ConnId conn = 0;
  std::uint32_t payload_len = 0;  // TCP segment plus TCP/IP headers
  std::uint32_t cell_count = 0;
  Segment segment;
};

struct Cell {
  VcId vc = 0;
  std::uint32_t index = 0;  // position within the frame
  bool eom = false;
  bool tagged = false;
  std::shared_ptr<const Frame> frame;

  FrameId frame_id() const { return frame->id; }
  bool first() const { return index == 0; }
};

/// Hands out frame ids unique within one simulation.
class FrameIdSource {
 public:
  FrameId next() { return ++last_; }

 private:
  FrameId last_ = 0;
};

/// Segments TCP packets into AAL5 cells.
class Segmenter {
 public:
  Segmenter(FrameIdSource& ids, std::uint32_t mfs_bytes);

  /// Cells for a frame of `frame_len` bytes on `vc`. Throws ConfigError for
  /// an empty frame or one larger than the MFS.
  std::vector<Cell> segment(VcId vc, std::uint32_t frame_len, const Segment& seg = {});

  /// Cells for a TCP segment; the frame carries `seg.len` plus 40 bytes of
  /// TCP/IP header.
  std::vector<Cell> segment_tcp(VcId vc, const Segment& seg);

  std::uint32_t mfs() const { return mfs_; }

 private:
  FrameIdSource* ids_;
  std::uint32_t mfs_;
};

/// Expands an already-built frame into cells on `vc`.
std::vector<Cell> cells_of(std::shared_ptr<const Frame> frame, VcId vc, bool tagged = false);

struct ReassemblyStats {
  std::uint64_t frames_delivered = 0;
  std::uint64_t frames_discarded = 0;
  std::uint64_t cells_received = 0;
};

/// Per-VC AAL5 reassembly. A frame is delivered only if every one of its
/// cells arrived in order. Cells of two frames interleaved on the same VC
/// throw ModelError.
class Reassembler {
 public:
  std::optional<std::shared_ptr<const Frame>> accept(const Cell& cell);
  const ReassemblyStats& stats() const { return stats_; }

 private:
  struct Partial {
    std::shared_ptr<const Frame> frame;
    std::uint32_t next_index = 0;
    bool corrupt = false;
  };
  std::unordered_map<VcId, Partial> partial_;
  ReassemblyStats stats_;
};

/// Frame-level round robin over per-input queues. Once a frame starts, all
/// of its cells are emitted before another input is selected, so frames
/// never interleave on the output VC.
class MergeScheduler {
 public:
  explicit MergeScheduler(std::size_t inputs);

  void enqueue(std::size_t input, std::shared_ptr<const Frame> frame, VcId out_vc);
  std::optional<Cell> next_cell();

  bool empty() const { return queued_frames_ == 0 && !current_; }
  std::size_t inputs() const { return queues_.size(); }
  std::size_t queued_frames(std::size_t input) const { return queues_.at(input).size(); }
  std::uint64_t frames_emitted(std::size_t input) const { return emitted_.at(input); }

 private:
  struct Queued {
    std::shared_ptr<const Frame> frame;
    VcId out_vc = 0;
  };
  struct Current {
    std::size_t input = 0;
    Queued item;
    std::uint32_t next_index = 0;
  };

  std::vector<std::deque<Queued>> queues_;
  std::vector<std::uint64_t> emitted_;
  std::size_t queued_frames_ = 0;
  std::size_t cursor_ = 0;  // next input to consider
  std::optional<Current> current_;
};

}  // namespace gfrsim
