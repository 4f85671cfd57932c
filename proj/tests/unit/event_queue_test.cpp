#include <gtest/gtest.h>

#include <vector>

#include "gfrsim/errors.hpp"
#include "gfrsim/event_queue.hpp"

namespace gfrsim {
namespace {

struct Recorder : EventHandler {
  std::vector<std::uint64_t> seen;
  void on_event(EventKind, std::uint64_t arg) override { seen.push_back(arg); }
};

TEST(Simulator, EventAtTimeZeroFiresFirst) {
  Simulator sim;
  Recorder r;
  sim.schedule(SimTime::from_ms(1), r, EventKind::timer, 2);
  sim.schedule(SimTime{}, r, EventKind::timer, 1);
  sim.run_until(SimTime::from_ms(5));
  EXPECT_EQ(r.seen, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Simulator, TiesBreakInSchedulingOrder) {
  Simulator sim;
  Recorder r;
  for (std::uint64_t i = 0; i < 50; ++i) sim.schedule(SimTime::from_us(7), r, EventKind::timer, i);
  sim.run_until(SimTime::from_us(7));
  ASSERT_EQ(r.seen.size(), 50u);
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_EQ(r.seen[i], i);
}

TEST(Simulator, SchedulingInThePastThrows) {
  Simulator sim;
  sim.run_until(SimTime::from_ns(10));
  EXPECT_THROW(sim.schedule(SimTime::from_ns(9), [] {}), ModelError);
  EXPECT_NO_THROW(sim.schedule(SimTime::from_ns(10), [] {}));
}

TEST(Simulator, EmptyQueueAdvancesClockToLimit) {
  Simulator sim;
  EXPECT_EQ(sim.run_until(SimTime::from_seconds(1)), 0u);
  EXPECT_EQ(sim.now(), SimTime::from_seconds(1));
}

TEST(Simulator, LimitIsInclusive) {
  Simulator sim;
  Recorder r;
  for (int ms = 1; ms <= 3; ++ms) sim.schedule(SimTime::from_ms(ms), r, EventKind::timer, ms);
  EXPECT_EQ(sim.run_until(SimTime::from_ms(2)), 2u);
  EXPECT_EQ(sim.pending(), 1u);
  EXPECT_EQ(sim.run_until(SimTime::from_ms(3)), 1u);
}

TEST(Simulator, CancelledEventsNeverFire) {
  Simulator sim;
  Recorder r;
  auto h = sim.schedule(SimTime::from_ms(1), r, EventKind::timer, 1);
  sim.schedule(SimTime::from_ms(2), r, EventKind::timer, 2);
  sim.cancel(h);
  EXPECT_EQ(sim.pending(), 1u);
  sim.run_until(SimTime::from_ms(10));
  EXPECT_EQ(r.seen, (std::vector<std::uint64_t>{2}));
}

TEST(Simulator, CallbacksCanScheduleMoreWork) {
  Simulator sim;
  int fired = 0;
  std::function<void()> tick = [&] {
    if (++fired < 5) sim.schedule(sim.now() + SimTime::from_us(1), tick);
  };
  sim.schedule(SimTime{}, tick);
  sim.run_until(SimTime::from_ms(1));
  EXPECT_EQ(fired, 5);
  EXPECT_EQ(sim.processed(), 5u);
}

// Order oracle: a brute-force stable sort of (time, insertion index) must
// match the firing order for a pseudo-random schedule.
TEST(Simulator, FiringOrderMatchesStableSortOracle) {
  Simulator sim;
  Recorder r;
  std::vector<std::pair<std::int64_t, std::uint64_t>> expected;
  std::uint64_t x = 12345;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    const std::int64_t t = static_cast<std::int64_t>((x >> 33) % 97);
    sim.schedule(SimTime::from_ns(t), r, EventKind::timer, i);
    expected.emplace_back(t, i);
  }
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  sim.run_until(SimTime::from_ns(100));
  ASSERT_EQ(r.seen.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(r.seen[i], expected[i].second);
}

TEST(Simulator, TraceHashIsReproducible) {
  auto run = [] {
    Simulator sim;
    Recorder r;
    for (int i = 0; i < 100; ++i) sim.schedule(SimTime::from_us(i * 3 % 17), r, EventKind::timer, i);
    sim.run_until(SimTime::from_ms(1));
    return sim.trace_hash();
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace gfrsim
