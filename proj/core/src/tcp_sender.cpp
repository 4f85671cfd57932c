#include <algorithm>
#include <cmath>
#include <string>

#include "gfrsim/errors.hpp"
#include "gfrsim/tcp.hpp"

namespace gfrsim {

TcpSender::TcpSender(ConnId conn, const TcpConfig& cfg) : conn_(conn), cfg_(cfg) {
  if (cfg_.mss == 0) throw ConfigError("tcp: mss must be positive");
  st_.mss = cfg_.mss;
  st_.wnd_scale = cfg_.wnd_scale;
  st_.rcv_wnd = cfg_.receiver_window();
  st_.cwnd = cfg_.initial_cwnd != 0 ? cfg_.initial_cwnd : cfg_.mss;
  st_.ssthresh = cfg_.initial_ssthresh != 0 ? cfg_.initial_ssthresh : st_.rcv_wnd;
  base_rto_ = cfg_.initial_rto;
  st_.rto = base_rto_;
}

Segment TcpSender::make_segment(std::uint64_t seq, bool retx) const {
  Segment s;
  s.conn = conn_;
  s.seq = seq;
  s.len = cfg_.mss;
  s.retransmission = retx;
  return s;
}

std::uint64_t TcpSender::pipe() const {
  if (sacked_count_ == 0 && lost_count_ == 0) return st_.flight();
  std::uint64_t segs = 0;
  for (const Sent& s : outstanding_) {
    if (s.sacked) continue;
    if (!s.lost) ++segs;
    if (s.retransmitted) ++segs;
  }
  return segs * cfg_.mss;
}

bool TcpSender::retransmit_hole(SimTime now, std::vector<Segment>& out, std::size_t& scan) {
  if (lost_count_ == 0) return false;
  for (; scan < outstanding_.size(); ++scan) {
    Sent& s = outstanding_[scan];
    if (s.lost && !s.retransmitted && !s.sacked) {
      s.retransmitted = true;
      s.sent_at = now;
      out.push_back(make_segment(s.seq, true));
      ++stats_.retransmissions;
      ++stats_.segments_sent;
      ++scan;
      return true;
    }
  }
  return false;
}

void TcpSender::fill_window(SimTime now, std::vector<Segment>& out, std::size_t retx_scan) {
  std::uint64_t in_pipe = pipe();
  while (in_pipe < st_.cwnd) {
    if (!retransmit_hole(now, out, retx_scan)) {
      if (st_.flight() >= st_.rcv_wnd) break;
      outstanding_.push_back(Sent{st_.snd_nxt, now});
      out.push_back(make_segment(st_.snd_nxt, false));
      st_.snd_nxt += cfg_.mss;
      ++stats_.segments_sent;
    }
    in_pipe += cfg_.mss;
    if (!timer_deadline_) arm_timer(now);
  }
}

std::vector<Segment> TcpSender::on_app_data(SimTime now) {
  std::vector<Segment> out;
  fill_window(now, out);
  return out;
}

void TcpSender::apply_sack(const Segment& ack) {
  for (std::size_t b = 0; b < ack.sack_count; ++b) {
    const SackBlock& blk = ack.sack[b];
    if (blk.end <= st_.snd_una || blk.start >= blk.end) continue;
    if (blk.end > st_.snd_nxt) {
      throw ModelError("tcp: SACK block beyond snd_nxt on conn " +
                       std::to_string(conn_));
    }
    std::uint64_t first = blk.start <= st_.snd_una
                              ? 0
                              : (blk.start - st_.snd_una + cfg_.mss - 1) / cfg_.mss;
    for (std::size_t k = first; k < outstanding_.size(); ++k) {
      Sent& s = outstanding_[k];
      if (s.seq + cfg_.mss > blk.end) break;
      if (!s.sacked) {
        s.sacked = true;
        ++sacked_count_;
        if (s.lost) --lost_count_;
      }
    }
  }
}

std::optional<std::uint64_t> TcpSender::mark_losses() {
  std::optional<std::uint64_t> lowest;
  if (sacked_count_ > 0) {
    const std::uint64_t need = std::uint64_t{cfg_.dupack_threshold} * cfg_.mss;
    std::uint64_t sacked_above = 0;
    for (auto it = outstanding_.rbegin(); it != outstanding_.rend(); ++it) {
      if (it->sacked) {
        sacked_above += cfg_.mss;
      } else if (!it->lost && sacked_above >= need) {
        it->lost = true;
        ++lost_count_;
        lowest = it->seq;
      }
    }
  }
  if (st_.dupacks >= cfg_.dupack_threshold && !outstanding_.empty()) {
    Sent& head = outstanding_.front();
    if (!head.sacked && !head.lost) {
      head.lost = true;
      ++lost_count_;
      lowest = head.seq;
    }
  }
  return lowest;
}

void TcpSender::grow_window() {
  if (st_.cwnd < st_.ssthresh) {
    st_.cwnd += cfg_.mss;
  } else {
    std::uint64_t mss = cfg_.mss;
    st_.cwnd += std::max<std::uint64_t>(1, mss * mss / st_.cwnd);
  }
  if (cfg_.cap_cwnd_at_rcv_wnd) st_.cwnd = std::min(st_.cwnd, st_.rcv_wnd);
}

void TcpSender::recompute_rto() {
  const double g = static_cast<double>(cfg_.timer_granularity.ns());
  double rto = *srtt_ns_ + std::max(g, 4.0 * rttvar_ns_);
  if (g > 0) rto = std::ceil(rto / g) * g;
  rto = std::clamp(rto, static_cast<double>(cfg_.min_rto.ns()),
                   static_cast<double>(cfg_.max_rto.ns()));
  base_rto_ = SimTime::from_ns(static_cast<std::int64_t>(rto));
}

void TcpSender::sample_rtt(SimTime sample) {
  const double r = static_cast<double>(sample.ns());
  if (!srtt_ns_) {
    srtt_ns_ = r;
    rttvar_ns_ = r / 2.0;
  } else {
    rttvar_ns_ = 0.75 * rttvar_ns_ + 0.25 * std::abs(*srtt_ns_ - r);
    srtt_ns_ = 0.875 * *srtt_ns_ + 0.125 * r;
  }
  recompute_rto();
  backoff_ = 1;
  st_.rto = base_rto_;
}

bool TcpSender::on_loss_detected() {
  if (st_.in_recovery) return false;
  st_.ssthresh = std::max<std::uint64_t>(st_.cwnd / 2, 2ULL * cfg_.mss);
  st_.cwnd = st_.ssthresh;
  st_.in_recovery = true;
  st_.recovery_point = st_.snd_nxt;
  ++stats_.fast_recoveries;
  return true;
}

std::vector<Segment> TcpSender::on_ack(const Segment& ack, SimTime now) {
  if (!ack.is_ack) throw ModelError("tcp: on_ack called with a data segment");
  if (ack.ack_seq > st_.snd_nxt) {
    throw ModelError("tcp: ACK for unsent data on conn " + std::to_string(conn_) +
                     " (ack " + std::to_string(ack.ack_seq) + ", snd_nxt " +
                     std::to_string(st_.snd_nxt) + ")");
  }
  st_.rcv_wnd = static_cast<std::uint64_t>(ack.window) << cfg_.wnd_scale;

  std::vector<Segment> out;
  if (ack.ack_seq < st_.snd_una) return out;  // stale

  if (ack.ack_seq > st_.snd_una) {
    if ((ack.ack_seq - st_.snd_una) % cfg_.mss != 0) {
      throw ModelError("tcp: ACK not on a segment boundary");
    }
    std::optional<SimTime> rtt;
    while (!outstanding_.empty() &&
           outstanding_.front().seq + cfg_.mss <= ack.ack_seq) {
      const Sent& s = outstanding_.front();
      if (s.seq + cfg_.mss == ack.ack_seq && !s.retransmitted && !s.sacked) {
        rtt = now - s.sent_at;
      }
      if (s.sacked) --sacked_count_;
      if (s.lost && !s.sacked) --lost_count_;
      outstanding_.pop_front();
    }
    st_.snd_una = ack.ack_seq;
    st_.dupacks = 0;
    if (rtt) sample_rtt(*rtt);

    if (st_.in_recovery) {
      if (st_.snd_una >= st_.recovery_point) st_.in_recovery = false;
    } else {
      grow_window();
    }
    if (st_.snd_una == st_.snd_nxt) {
      timer_deadline_.reset();
    } else {
      arm_timer(now);
    }
  } else if (st_.snd_una < st_.snd_nxt) {
    ++st_.dupacks;
  }

  apply_sack(ack);
  std::size_t retx_scan = 0;
  if (auto lost = mark_losses()) {
    // Entering recovery retransmits the first hole at once, whatever the pipe.
    if (!st_.in_recovery && *lost >= st_.recovery_point && on_loss_detected()) {
      retransmit_hole(now, out, retx_scan);
    }
  }
  fill_window(now, out, retx_scan);
  return out;
}

std::vector<Segment> TcpSender::on_timeout(SimTime now) {
  std::vector<Segment> out;
  timer_deadline_.reset();
  if (st_.snd_una == st_.snd_nxt) return out;
  ++stats_.timeouts;
  st_.ssthresh = std::max<std::uint64_t>(st_.cwnd / 2, 2ULL * cfg_.mss);
  st_.cwnd = cfg_.mss;
  st_.in_recovery = false;
  st_.recovery_point = st_.snd_nxt;
  st_.dupacks = 0;
  lost_count_ = 0;
  for (Sent& s : outstanding_) {
    s.retransmitted = false;
    s.lost = !s.sacked;
    if (s.lost) ++lost_count_;
  }
  backoff_ = std::min<std::int64_t>(backoff_ * 2, 64);
  st_.rto = std::min(base_rto_ * backoff_, cfg_.max_rto);
  fill_window(now, out);
  return out;
}

std::vector<SackBlock> TcpSender::sacked_ranges() const {
  std::vector<SackBlock> out;
  for (const Sent& s : outstanding_) {
    if (!s.sacked) continue;
    if (!out.empty() && out.back().end == s.seq) {
      out.back().end = s.seq + cfg_.mss;
    } else {
      out.push_back({s.seq, s.seq + cfg_.mss});
    }
  }
  return out;
}

}  // namespace gfrsim
