#include <gtest/gtest.h>

#include "gfrsim/tcp.hpp"

namespace gfrsim {
namespace {

constexpr std::uint32_t kMss = 1024;

Segment data(std::uint64_t index) {
  Segment s;
  s.seq = index * kMss;
  s.len = kMss;
  return s;
}

TEST(TcpReceiver, InOrderSegmentIsAckedWithoutSack) {
  TcpReceiver r(0, TcpConfig{});
  const auto a = r.on_data_segment(data(0), SimTime{});
  ASSERT_TRUE(a);
  EXPECT_TRUE(a->is_ack);
  EXPECT_EQ(a->ack_seq, kMss);
  EXPECT_EQ(a->sack_count, 0);
  EXPECT_EQ(a->window, 37500u);
}

TEST(TcpReceiver, GapProducesDuplicateAckWithSackBlock) {
  TcpReceiver r(0, TcpConfig{});
  r.on_data_segment(data(0), SimTime{});
  const auto a = r.on_data_segment(data(2), SimTime{});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->ack_seq, kMss);
  ASSERT_EQ(a->sack_count, 1);
  EXPECT_EQ(a->sack[0], (SackBlock{2 * kMss, 3 * kMss}));
}

TEST(TcpReceiver, HoleFillAdvancesOverTheIsland) {
  TcpReceiver r(0, TcpConfig{});
  r.on_data_segment(data(1), SimTime{});
  r.on_data_segment(data(2), SimTime{});
  EXPECT_EQ(r.delivered_bytes(), 0u);
  EXPECT_EQ(r.unique_bytes_received(), 2u * kMss);
  const auto a = r.on_data_segment(data(0), SimTime{});
  EXPECT_EQ(a->ack_seq, 3u * kMss);
  EXPECT_EQ(a->sack_count, 0);
  EXPECT_EQ(r.delivered_bytes(), 3u * kMss);
}

TEST(TcpReceiver, AtMostThreeBlocksMostRecentFirst) {
  TcpReceiver r(0, TcpConfig{});
  for (std::uint64_t i : {2, 4, 6, 8}) r.on_data_segment(data(i), SimTime{});
  const auto a = r.on_data_segment(data(10), SimTime{});
  ASSERT_EQ(a->sack_count, 3);
  EXPECT_EQ(a->sack[0].start, 10u * kMss);
  EXPECT_EQ(a->sack[1].start, 8u * kMss);
  EXPECT_EQ(a->sack[2].start, 6u * kMss);
}

TEST(TcpReceiver, DuplicatesAreNeverDeliveredTwice) {
  TcpReceiver r(0, TcpConfig{});
  r.on_data_segment(data(0), SimTime{});
  const auto a = r.on_data_segment(data(0), SimTime{});
  ASSERT_TRUE(a);
  EXPECT_EQ(a->ack_seq, kMss);
  EXPECT_EQ(r.delivered_bytes(), kMss);
}

TEST(TcpReceiver, DelayedAckEveryOtherSegment) {
  TcpConfig c;
  c.delayed_ack = true;
  TcpReceiver r(0, c);
  int acks = 0;
  for (std::uint64_t i = 0; i < 10; ++i) acks += r.on_data_segment(data(i), SimTime{}) ? 1 : 0;
  EXPECT_EQ(acks, 5);
}

TEST(TcpReceiver, DelayedAckTimerFlushesALoneSegment) {
  TcpConfig c;
  c.delayed_ack = true;
  TcpReceiver r(0, c);
  EXPECT_FALSE(r.on_data_segment(data(0), SimTime::from_ms(5)));
  ASSERT_TRUE(r.delack_deadline());
  EXPECT_EQ(*r.delack_deadline(), SimTime::from_ms(205));
  const auto a = r.on_delack_timeout(SimTime::from_ms(205));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->ack_seq, kMss);
  EXPECT_FALSE(r.delack_deadline());
}

TEST(TcpReceiver, OutOfOrderArrivalIsAckedAtOnceEvenWithDelayedAck) {
  TcpConfig c;
  c.delayed_ack = true;
  TcpReceiver r(0, c);
  EXPECT_TRUE(r.on_data_segment(data(3), SimTime{}));
}

}  // namespace
}  // namespace gfrsim
