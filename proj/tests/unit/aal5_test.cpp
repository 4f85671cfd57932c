#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "gfrsim/aal5.hpp"
#include "gfrsim/errors.hpp"

namespace gfrsim {
namespace {

// Smallest n with 48 n >= len + 8, found by counting.
std::uint32_t cells_by_search(std::uint32_t len) {
  std::uint32_t n = 0;
  while (48 * n < len + 8) ++n;
  return n;
}

TEST(Aal5, CellCountMatchesSearchOracle) {
  for (std::uint32_t len = 1; len <= 9180; ++len) {
    ASSERT_EQ(cells_for_frame(len), cells_by_search(len)) << len;
  }
}

TEST(Aal5, DataSegmentIs23CellsAndAckIsOne) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Segment data;
  data.len = 1024;
  EXPECT_EQ(seg.segment_tcp(1, data).size(), 23u);
  Segment ack;
  ack.is_ack = true;
  EXPECT_EQ(seg.segment_tcp(1, ack).size(), 1u);
}

TEST(Aal5, OnlyLastCellCarriesEom) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  auto cells = seg.segment(4, 1064);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i].index, i);
    EXPECT_EQ(cells[i].vc, 4u);
    EXPECT_EQ(cells[i].eom, i + 1 == cells.size());
    EXPECT_EQ(cells[i].frame_id(), cells[0].frame_id());
  }
}

TEST(Aal5, FrameIdsAreUnique) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  auto a = seg.segment(1, 100);
  auto b = seg.segment(1, 100);
  EXPECT_NE(a[0].frame_id(), b[0].frame_id());
}

TEST(Aal5, RejectsEmptyAndOversizeFrames) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  EXPECT_THROW(seg.segment(1, 0), ConfigError);
  EXPECT_THROW(seg.segment(1, 9181), ConfigError);
  EXPECT_NO_THROW(seg.segment(1, 9180));
}

TEST(Aal5, ReassemblesCompleteFrame) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto cells = seg.segment(2, 1064);
  std::optional<std::shared_ptr<const Frame>> out;
  for (const Cell& c : cells) out = r.accept(c);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ((*out)->cell_count, 23u);
  EXPECT_EQ(r.stats().frames_delivered, 1u);
  EXPECT_EQ(r.stats().cells_received, 23u);
}

TEST(Aal5, FrameMissingAMiddleCellIsDiscarded) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto cells = seg.segment(2, 1064);
  cells.erase(cells.begin() + 10);
  for (const Cell& c : cells) EXPECT_FALSE(r.accept(c).has_value());
  EXPECT_EQ(r.stats().frames_discarded, 1u);
  EXPECT_EQ(r.stats().frames_delivered, 0u);
}

TEST(Aal5, FrameMissingItsTailIsDiscardedWhenNextFrameStarts) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto first = seg.segment(2, 1064);
  first.pop_back();
  for (const Cell& c : first) r.accept(c);
  std::optional<std::shared_ptr<const Frame>> out;
  for (const Cell& c : seg.segment(2, 1064)) out = r.accept(c);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(r.stats().frames_discarded, 1u);
  EXPECT_EQ(r.stats().frames_delivered, 1u);
}

TEST(Aal5, FrameMissingItsHeadIsDiscarded) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto cells = seg.segment(2, 1064);
  cells.erase(cells.begin());
  for (const Cell& c : cells) EXPECT_FALSE(r.accept(c).has_value());
  EXPECT_EQ(r.stats().frames_discarded, 1u);
}

TEST(Aal5, InterleavedFramesOnOneVcThrow) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto a = seg.segment(2, 1064);
  auto b = seg.segment(2, 1064);
  r.accept(a[0]);
  r.accept(b[0]);  // a lost its tail; b starts cleanly
  EXPECT_THROW(r.accept(a[1]), ModelError);
}

TEST(Aal5, DifferentVcsReassembleIndependently) {
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  Reassembler r;
  auto a = seg.segment(1, 500);
  auto b = seg.segment(2, 500);
  ASSERT_EQ(a.size(), b.size());
  int delivered = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    delivered += r.accept(a[i]).has_value();
    delivered += r.accept(b[i]).has_value();
  }
  EXPECT_EQ(delivered, 2);
}

std::shared_ptr<const Frame> make_frame(FrameId id, std::uint32_t len) {
  auto f = std::make_shared<Frame>();
  f->id = id;
  f->payload_len = len;
  f->cell_count = cells_for_frame(len);
  return f;
}

TEST(MergeScheduler, NeverInterleavesFramesOnOutputVc) {
  MergeScheduler m(3);
  FrameId id = 0;
  for (int k = 0; k < 20; ++k) {
    for (std::size_t in = 0; in < 3; ++in) m.enqueue(in, make_frame(++id, 100 + 300 * in), 9);
  }
  Reassembler r;
  std::size_t delivered = 0;
  while (auto c = m.next_cell()) {
    EXPECT_EQ(c->vc, 9u);
    if (r.accept(*c)) ++delivered;
  }
  EXPECT_EQ(delivered, 60u);
  EXPECT_EQ(r.stats().frames_discarded, 0u);
  EXPECT_TRUE(m.empty());
}

TEST(MergeScheduler, BackloggedInputsShareFramesEqually) {
  MergeScheduler m(3);
  FrameId id = 0;
  const std::size_t per_input = 400;
  for (std::size_t k = 0; k < per_input; ++k) {
    for (std::size_t in = 0; in < 3; ++in) m.enqueue(in, make_frame(++id, 1064), 1);
  }
  // Drain the first 1000 frames and check each input got 1/3 of them.
  std::size_t frames = 0;
  while (frames < 1000) {
    auto c = m.next_cell();
    ASSERT_TRUE(c.has_value());
    if (c->eom) ++frames;
  }
  for (std::size_t in = 0; in < 3; ++in) {
    EXPECT_NEAR(static_cast<double>(m.frames_emitted(in)), 1000.0 / 3.0, 1.0) << in;
  }
}

TEST(MergeScheduler, SkipsEmptyInputs) {
  MergeScheduler m(4);
  m.enqueue(2, make_frame(1, 40), 1);
  auto c = m.next_cell();
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(c->eom);
  EXPECT_EQ(m.frames_emitted(2), 1u);
  EXPECT_FALSE(m.next_cell().has_value());
}

TEST(MergeScheduler, RejectsZeroInputs) { EXPECT_THROW(MergeScheduler(0), ConfigError); }

}  // namespace
}  // namespace gfrsim
