#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gfrsim/sim_time.hpp"
#include "gfrsim/types.hpp"

namespace gfrsim {

/// Half-open byte range [start, end).
struct SackBlock {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  friend bool operator==(const SackBlock&, const SackBlock&) = default;
};

inline constexpr std::size_t kMaxSackBlocks = 3;

struct Segment {
  ConnId conn = 0;
  std::uint64_t seq = 0;
  std::uint32_t len = 0;
  bool is_ack = false;
  std::uint64_t ack_seq = 0;
  std::uint32_t window = 0;  // advertised window field, before scaling
  std::array<SackBlock, kMaxSackBlocks> sack{};
  std::uint8_t sack_count = 0;
  bool retransmission = false;
};

struct TcpConfig {
  std::uint32_t mss = 1024;
  std::uint32_t rcv_wnd_field = 37500;
  std::uint8_t wnd_scale = 4;
  std::uint64_t initial_cwnd = 0;      // 0 means one mss
  std::uint64_t initial_ssthresh = 0;  // 0 means the receiver window
  bool delayed_ack = false;
  // Growth stops at the receiver window, so an unlimited sender plateaus
  // there instead of inflating cwnd without bound.
  bool cap_cwnd_at_rcv_wnd = true;
  std::uint32_t dupack_threshold = 3;
  SimTime min_rto = SimTime::from_ms(500);
  SimTime max_rto = SimTime::from_ms(64'000);
  SimTime initial_rto = SimTime::from_ms(1'000);
  SimTime timer_granularity = SimTime::from_ms(100);
  SimTime delack_timeout = SimTime::from_ms(200);

  std::uint64_t receiver_window() const {
    return static_cast<std::uint64_t>(rcv_wnd_field) << wnd_scale;
  }
};

/// Sender-side connection state, as visible to callers.
struct TcpConnState {
  std::uint64_t cwnd = 0;
  std::uint64_t ssthresh = 0;
  std::uint32_t mss = 0;
  std::uint64_t rcv_wnd = 0;
  std::uint8_t wnd_scale = 0;
  std::uint64_t snd_una = 0;
  std::uint64_t snd_nxt = 0;
  std::uint64_t recovery_point = 0;
  SimTime rto;
  bool in_recovery = false;
  std::uint32_t dupacks = 0;

  std::uint64_t effective_window() const { return std::min(cwnd, rcv_wnd); }
  std::uint64_t flight() const { return snd_nxt - snd_una; }
};

struct TcpSenderStats {
  std::uint64_t segments_sent = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t fast_recoveries = 0;
  std::uint64_t timeouts = 0;
};

/// SACK TCP sender with an infinite backlog. Every data segment is exactly
/// one mss long. Loss recovery follows the conservative SACK pipe rule:
/// a segment is lost once dupack_threshold segments above it are SACKed,
/// and transmission is allowed while the pipe estimate is below cwnd.
class TcpSender {
 public:
  TcpSender(ConnId conn, const TcpConfig& cfg);

  /// Emits as many segments as the window allows.
  std::vector<Segment> on_app_data(SimTime now);

  /// Processes an ACK and returns what must be (re)transmitted.
  /// Throws ModelError for an ACK of unsent data.
  std::vector<Segment> on_ack(const Segment& ack, SimTime now);

  /// Halves the window once per recovery epoch. Returns false when already
  /// recovering (no further halving).
  bool on_loss_detected();

  /// RTO expiry: window collapses to one segment, every un-SACKed segment
  /// is presumed lost, and retransmission starts.
  std::vector<Segment> on_timeout(SimTime now);

  /// Time the retransmission timer fires, if running.
  std::optional<SimTime> rto_deadline() const { return timer_deadline_; }

  const TcpConnState& state() const { return st_; }
  const TcpSenderStats& stats() const { return stats_; }
  ConnId conn() const { return conn_; }

  /// SACKed byte ranges above the cumulative ACK point, merged.
  std::vector<SackBlock> sacked_ranges() const;
  std::uint64_t pipe() const;

 private:
  struct Sent {
    std::uint64_t seq = 0;
    SimTime sent_at;
    bool retransmitted = false;
    bool sacked = false;
    bool lost = false;
  };

  void fill_window(SimTime now, std::vector<Segment>& out, std::size_t retx_scan = 0);
  /// Retransmits the first unsent hole at or after `scan`; advances `scan`.
  bool retransmit_hole(SimTime now, std::vector<Segment>& out, std::size_t& scan);
  Segment make_segment(std::uint64_t seq, bool retx) const;
  void apply_sack(const Segment& ack);
  std::optional<std::uint64_t> mark_losses();
  void grow_window();
  void sample_rtt(SimTime sample);
  void recompute_rto();
  void arm_timer(SimTime now) { timer_deadline_ = now + st_.rto; }

  ConnId conn_;
  TcpConfig cfg_;
  TcpConnState st_;
  TcpSenderStats stats_;
  std::deque<Sent> outstanding_;
  std::size_t sacked_count_ = 0;
  std::size_t lost_count_ = 0;
  std::optional<SimTime> timer_deadline_;
  std::optional<double> srtt_ns_;
  double rttvar_ns_ = 0.0;
  SimTime base_rto_;
  std::int64_t backoff_ = 1;
};

/// Cumulative-ACK receiver advertising up to three SACK blocks, most
/// recently changed block first.
class TcpReceiver {
 public:
  TcpReceiver(ConnId conn, const TcpConfig& cfg);

  std::optional<Segment> on_data_segment(const Segment& seg, SimTime now);
  std::optional<Segment> on_delack_timeout(SimTime now);
  std::optional<SimTime> delack_deadline() const { return delack_deadline_; }

  ConnId conn() const { return conn_; }
  std::uint64_t rcv_nxt() const { return rcv_nxt_; }
  /// In-order payload bytes handed to the application; each byte counted
  /// once.
  std::uint64_t delivered_bytes() const { return rcv_nxt_; }
  /// Distinct payload bytes received so far, in order or held above a hole.
  std::uint64_t unique_bytes_received() const;
  std::uint64_t acks_sent() const { return acks_sent_; }
  /// Out-of-order ranges held above rcv_nxt.
  std::vector<SackBlock> out_of_order() const;

 private:
  Segment make_ack();

  ConnId conn_;
  TcpConfig cfg_;
  std::uint64_t rcv_nxt_ = 0;
  std::map<std::uint64_t, std::uint64_t> ooo_;  // start -> end
  std::deque<std::uint64_t> recent_;            // seqs of recent arrivals
  std::uint32_t unacked_segments_ = 0;
  std::optional<SimTime> delack_deadline_;
  std::uint64_t acks_sent_ = 0;
};

}  // namespace gfrsim
