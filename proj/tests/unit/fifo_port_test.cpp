#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <vector>

#include "gfrsim/errors.hpp"
#include "gfrsim/fifo_port.hpp"
#include "gfrsim/random.hpp"

namespace gfrsim {
namespace {

struct Collector : CellSink {
  std::vector<Cell> cells;
  std::function<void(const Cell&)> on_cell;
  void receive_cell(Cell c) override {
    if (on_cell) on_cell(c);
    cells.push_back(std::move(c));
  }
};

void offer(FifoPort& port, const std::vector<Cell>& cells) {
  for (const Cell& c : cells) port.on_cell_arrival(c);
}

TEST(FifoPort, AcceptedFrameGrowsOccupancyByItsCells) {
  Simulator sim;
  Collector out;
  FifoPort port(sim, "p", LinkConfig{}, BufferConfig{}, nullptr, &out);
  port.add_vc(1);
  port.add_vc(2);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  offer(port, seg.segment(2, 40));  // occupies the link
  offer(port, seg.segment(1, 1064));
  EXPECT_EQ(port.account(1).occupancy, 23u);
  EXPECT_EQ(port.occupancy(), 23u);
  port.check_invariants();
  sim.run_until(SimTime::from_ms(1));
  EXPECT_EQ(out.cells.size(), 24u);
  EXPECT_EQ(port.occupancy(), 0u);
}

TEST(FifoPort, OverflowCutsFrameAndKeepsPrefix) {
  Simulator sim;
  Collector out;
  BufferConfig buf;
  buf.capacity = 9;
  buf.congestion_threshold = 9;
  buf.check_invariants = true;
  FifoPort port(sim, "p", LinkConfig{}, buf, nullptr, &out);
  port.add_vc(1);
  port.add_vc(2);
  std::map<CellFate, int> fates;
  port.set_observer([&](const Cell& c, CellFate f, std::uint32_t) {
    if (c.vc == 1) ++fates[f];
  });
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  offer(port, seg.segment(2, 40));
  offer(port, seg.segment(1, 1064));
  EXPECT_EQ(fates[CellFate::enqueued], 9);
  EXPECT_EQ(fates[CellFate::dropped_overflow], 1);
  EXPECT_EQ(fates[CellFate::dropped_ppd], 13);
  EXPECT_EQ(port.account(1).occupancy, 9u);
  EXPECT_EQ(port.account(1).frames_truncated, 1u);
  EXPECT_EQ(port.account(1).frame_state, FrameState::idle);

  // The next frame on the VC starts clean once space frees up.
  sim.run_until(SimTime::from_ms(1));
  offer(port, seg.segment(1, 200));
  EXPECT_EQ(port.account(1).occupancy, 4u);
  EXPECT_EQ(port.account(1).frames_truncated, 1u);
}

TEST(FifoPort, EpdDropsWholeFrame) {
  Simulator sim;
  Collector out;
  BufferConfig buf;
  buf.capacity = 1000;
  buf.congestion_threshold = 0;  // every first cell sees X >= R
  FifoPort port(sim, "p", LinkConfig{}, buf, std::make_unique<GfrPolicy>(RandomSource(1)), &out);
  VcParams params;
  params.threshold = 100;
  port.add_vc(1, params);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  offer(port, seg.segment(1, 1064));
  EXPECT_EQ(port.account(1).occupancy, 0u);
  EXPECT_EQ(port.account(1).cells_enqueued, 0u);
  EXPECT_EQ(port.account(1).cells_dropped, 23u);
  EXPECT_EQ(port.account(1).frames_dropped, 1u);
  sim.run_until(SimTime::from_ms(1));
  EXPECT_TRUE(out.cells.empty());
}

TEST(FifoPort, ServesCellsInArrivalOrder) {
  Simulator sim;
  Collector out;
  FifoPort port(sim, "p", LinkConfig{}, BufferConfig{}, nullptr, &out);
  port.add_vc(1);
  port.add_vc(2);
  port.add_vc(3);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  std::vector<FrameId> sent;
  for (VcId vc : {3u, 1u, 2u, 1u}) {
    auto cells = seg.segment(vc, 40);
    sent.push_back(cells[0].frame_id());
    offer(port, cells);
  }
  sim.run_until(SimTime::from_ms(1));
  ASSERT_EQ(out.cells.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out.cells[i].frame_id(), sent[i]);
}

TEST(FifoPort, IdleLinkSchedulesNothing) {
  Simulator sim;
  Collector out;
  FifoPort port(sim, "p", LinkConfig{}, BufferConfig{}, nullptr, &out);
  port.add_vc(1);
  EXPECT_EQ(sim.pending(), 0u);
}

TEST(FifoPort, UnknownVcAndBadBufferAreConfigErrors) {
  Simulator sim;
  Collector out;
  FifoPort port(sim, "p", LinkConfig{}, BufferConfig{}, nullptr, &out);
  port.add_vc(1);
  EXPECT_THROW(port.add_vc(1), ConfigError);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  EXPECT_THROW(offer(port, seg.segment(7, 40)), ConfigError);

  BufferConfig bad;
  bad.capacity = 10;
  bad.congestion_threshold = 11;
  EXPECT_THROW(FifoPort(sim, "q", LinkConfig{}, bad, nullptr, &out), ConfigError);
}

TEST(FifoPort, InvariantsHoldUnderRandomLoad) {
  Simulator sim;
  Collector out;
  BufferConfig buf;
  buf.capacity = 200;
  buf.congestion_threshold = 200;
  buf.check_invariants = true;
  FifoPort port(sim, "p", LinkConfig{}, buf, nullptr, &out);
  for (VcId vc = 1; vc <= 4; ++vc) port.add_vc(vc);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  RandomSource rng(9);
  SimTime t;
  for (int k = 0; k < 3000; ++k) {
    t = t + SimTime::from_ns(static_cast<std::int64_t>(rng.next_uniform() * 4000));
    const auto vc = static_cast<VcId>(1 + rng.next_uniform() * 4);
    const auto len = static_cast<std::uint32_t>(1 + rng.next_uniform() * 1500);
    sim.schedule(t, [&, vc, len] { offer(port, seg.segment(vc, len)); });
  }
  EXPECT_NO_THROW(sim.run_until(t + SimTime::from_ms(100)));
  EXPECT_GT(port.stats().frames_truncated, 0u);
  EXPECT_EQ(port.stats().cells_in, port.stats().cells_out + port.stats().cells_dropped);
}

// Synthetic traffic: every departing cell is replaced by a new cell of the
// same VC, so X_i / X stays fixed at its initial value. Output share must
// then equal that fraction.
TEST(FifoPort, OutputShareEqualsOccupancyShare) {
  Simulator sim;
  Collector out;
  FifoPort port(sim, "p", LinkConfig{}, BufferConfig{}, nullptr, &out);
  port.add_vc(1);
  port.add_vc(2);
  FrameIdSource ids;
  Segmenter seg(ids, 9180);
  RandomSource rng(5);
  const int x1 = 37;
  const int x2 = 63;
  std::vector<VcId> initial;
  initial.insert(initial.end(), x1, 1);
  initial.insert(initial.end(), x2, 2);
  for (std::size_t i = initial.size(); i > 1; --i) {
    std::swap(initial[i - 1], initial[static_cast<std::size_t>(rng.next_uniform() * i)]);
  }
  std::uint64_t served[3] = {0, 0, 0};
  const std::uint64_t target = 100000;
  out.on_cell = [&](const Cell& c) {
    ++served[c.vc];
    if (served[1] + served[2] < target) offer(port, seg.segment(c.vc, 40));
  };
  for (VcId vc : initial) offer(port, seg.segment(vc, 40));
  sim.run_until(SimTime::from_seconds(1.0));
  const double total = static_cast<double>(served[1] + served[2]);
  ASSERT_GE(total, static_cast<double>(target));
  EXPECT_NEAR(served[1] / total, x1 / 100.0, 0.02);
  EXPECT_NEAR(served[2] / total, x2 / 100.0, 0.02);
}

}  // namespace
}  // namespace gfrsim
