#include <algorithm>

#include "gfrsim/errors.hpp"
#include "gfrsim/tcp.hpp"

namespace gfrsim {

namespace {
constexpr std::size_t kRecentHistory = 8;
}

TcpReceiver::TcpReceiver(ConnId conn, const TcpConfig& cfg) : conn_(conn), cfg_(cfg) {}

std::uint64_t TcpReceiver::unique_bytes_received() const {
  std::uint64_t n = rcv_nxt_;
  for (const auto& [start, end] : ooo_) n += end - start;
  return n;
}

std::vector<SackBlock> TcpReceiver::out_of_order() const {
  std::vector<SackBlock> out;
  out.reserve(ooo_.size());
  for (const auto& [s, e] : ooo_) out.push_back({s, e});
  return out;
}

Segment TcpReceiver::make_ack() {
  Segment a;
  a.conn = conn_;
  a.is_ack = true;
  a.ack_seq = rcv_nxt_;
  a.window = cfg_.rcv_wnd_field;

  // Most recent arrival's block first, then earlier distinct blocks.
  std::deque<std::uint64_t> kept;
  for (std::uint64_t seq : recent_) {
    auto it = ooo_.upper_bound(seq);
    if (it == ooo_.begin()) continue;
    --it;
    if (seq >= it->second) continue;
    SackBlock blk{it->first, it->second};
    bool dup = false;
    for (std::size_t i = 0; i < a.sack_count; ++i) dup = dup || a.sack[i] == blk;
    if (dup) continue;
    kept.push_back(seq);
    if (a.sack_count < kMaxSackBlocks) a.sack[a.sack_count++] = blk;
  }
  recent_ = std::move(kept);
  while (recent_.size() > kRecentHistory) recent_.pop_back();

  unacked_segments_ = 0;
  delack_deadline_.reset();
  ++acks_sent_;
  return a;
}

std::optional<Segment> TcpReceiver::on_data_segment(const Segment& seg, SimTime now) {
  if (seg.is_ack) throw ModelError("tcp: receiver got a pure ACK");
  const std::uint64_t end = seg.seq + seg.len;

  if (end <= rcv_nxt_) return make_ack();  // duplicate

  if (seg.seq > rcv_nxt_) {
    auto [it, inserted] = ooo_.try_emplace(seg.seq, end);
    if (!inserted) it->second = std::max(it->second, end);
    // Merge with neighbours.
    if (it != ooo_.begin()) {
      auto prev = std::prev(it);
      if (prev->second >= it->first) {
        prev->second = std::max(prev->second, it->second);
        ooo_.erase(it);
        it = prev;
      }
    }
    for (auto next = std::next(it); next != ooo_.end() && next->first <= it->second;
         next = ooo_.erase(next)) {
      it->second = std::max(it->second, next->second);
    }
    recent_.push_front(seg.seq);
    return make_ack();
  }

  // In order (possibly overlapping rcv_nxt).
  const bool filled_hole = !ooo_.empty();
  rcv_nxt_ = end;
  while (!ooo_.empty() && ooo_.begin()->first <= rcv_nxt_) {
    rcv_nxt_ = std::max(rcv_nxt_, ooo_.begin()->second);
    ooo_.erase(ooo_.begin());
  }
  if (filled_hole || !cfg_.delayed_ack) return make_ack();

  if (++unacked_segments_ >= 2) return make_ack();
  if (!delack_deadline_) delack_deadline_ = now + cfg_.delack_timeout;
  return std::nullopt;
}

std::optional<Segment> TcpReceiver::on_delack_timeout(SimTime /*now*/) {
  delack_deadline_.reset();
  if (unacked_segments_ == 0) return std::nullopt;
  return make_ack();
}

}  // namespace gfrsim
