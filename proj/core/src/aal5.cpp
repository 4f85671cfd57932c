#include "gfrsim/aal5.hpp"

#include <string>

#include "gfrsim/errors.hpp"

namespace gfrsim {

Segmenter::Segmenter(FrameIdSource& ids, std::uint32_t mfs_bytes)
    : ids_(&ids), mfs_(mfs_bytes) {}

std::vector<Cell> cells_of(std::shared_ptr<const Frame> frame, VcId vc, bool tagged) {
  std::vector<Cell> cells(frame->cell_count);
  for (std::uint32_t i = 0; i < frame->cell_count; ++i) {
    Cell& c = cells[i];
    c.vc = vc;
    c.index = i;
    c.eom = i + 1 == frame->cell_count;
    c.tagged = tagged;
    c.frame = frame;
  }
  return cells;
}

std::vector<Cell> Segmenter::segment(VcId vc, std::uint32_t frame_len, const Segment& seg) {
  if (frame_len == 0) throw ConfigError("aal5: cannot segment an empty frame");
  if (frame_len > mfs_) {
    throw ConfigError("aal5: frame of " + std::to_string(frame_len) +
                      " bytes exceeds MFS " + std::to_string(mfs_));
  }
  auto frame = std::make_shared<Frame>();
  frame->id = ids_->next();
  frame->vc = vc;
  frame->conn = seg.conn;
  frame->payload_len = frame_len;
  frame->cell_count = cells_for_frame(frame_len);
  frame->segment = seg;
  return cells_of(std::move(frame), vc);
}

std::vector<Cell> Segmenter::segment_tcp(VcId vc, const Segment& seg) {
  return segment(vc, seg.len + kTcpIpHeaderBytes, seg);
}

std::optional<std::shared_ptr<const Frame>> Reassembler::accept(const Cell& cell) {
  ++stats_.cells_received;
  auto [it, fresh] = partial_.try_emplace(cell.vc);
  Partial& p = it->second;

  if (!fresh && p.frame && p.frame->id != cell.frame_id()) {
    if (!cell.first()) {
      throw ModelError("aal5: frames " + std::to_string(p.frame->id) + " and " +
                       std::to_string(cell.frame_id()) + " interleaved on VC " +
                       std::to_string(cell.vc));
    }
    // The previous frame lost its tail (end of message never arrived).
    ++stats_.frames_discarded;
    p = Partial{};
  }
  if (!p.frame) {
    if (!cell.first()) {
      // Head of this frame was lost upstream; nothing to rebuild.
      p.frame = cell.frame;
      p.corrupt = true;
    } else {
      p.frame = cell.frame;
    }
    p.next_index = cell.index;
  }
  if (cell.index != p.next_index) p.corrupt = true;
  p.next_index = cell.index + 1;

  if (!cell.eom) return std::nullopt;

  std::shared_ptr<const Frame> done = std::move(p.frame);
  const bool ok = !p.corrupt && p.next_index == done->cell_count;
  p = Partial{};
  if (!ok) {
    ++stats_.frames_discarded;
    return std::nullopt;
  }
  ++stats_.frames_delivered;
  return done;
}

}  // namespace gfrsim
