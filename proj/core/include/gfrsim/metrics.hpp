#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfrsim/sim_time.hpp"
#include "gfrsim/types.hpp"

namespace gfrsim {

// ---------------------------------------------------------------------------
// Window/throughput relations.

/// Mbps carried by a window-limited flow: 8e-6 * avg_cwnd / rtt.
/// Throws std::invalid_argument if rtt_seconds <= 0.
double throughput_from_cwnd(double avg_cwnd_bytes, double rtt_seconds);

/// Mean window over a linear-increase phase of `rounds` round trips that
/// starts at cwnd_max/2 and grows by one mss per round:
/// (1/T) * sum_{i=1..T} (cwnd_max/2 + mss*i) = cwnd_max/2 + mss*(T+1)/2.
/// Throws std::invalid_argument if rounds == 0.
double avg_cwnd_linear_phase(double cwnd_max, double mss, std::uint64_t rounds);

/// Round trips for the window to climb from cwnd_max/2 to cwnd_max at one
/// mss per round.
std::uint64_t linear_phase_rounds(double cwnd_max, double mss);

/// Steady-state FIFO output share: mu * x_i / x. Throws if x <= 0.
double fifo_share(double x_i, double x, double mu);

/// Allocation-proportional share: mu * r_i / r_total. Throws if r_total <= 0.
double expected_share(double mu, double r_i, double r_total);

/// Peak TCP payload rate of a link under the AAL5 encapsulation model: one
/// mss-byte segment per frame of cells_for_frame(mss + 40) cells.
double tcp_capacity_mbps(std::uint64_t link_rate_bps, std::uint32_t mss);

// ---------------------------------------------------------------------------
// Traces.

struct TracePoint {
  SimTime t;
  double value = 0.0;
};

/// Sampled time series with strictly increasing timestamps.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::string name) : name_(std::move(name)) {}

  /// Throws ModelError if `t` does not advance.
  void add(SimTime t, double value);

  const std::string& name() const { return name_; }
  std::span<const TracePoint> points() const { return points_; }
  bool empty() const { return points_.empty(); }

 private:
  std::string name_;
  std::vector<TracePoint> points_;
};

/// Time-weighted mean of a piecewise-constant (sample-and-hold) trace over
/// [from, to].
double time_weighted_mean(const Trace& trace, SimTime from, SimTime to);

struct SawtoothStats {
  double mean_peak = 0.0;
  double mean_trough = 0.0;
  std::size_t cycles = 0;
};

/// Peaks and troughs of a loss-driven window trace after `from`: a peak is
/// the last sample before a drop of more than `min_drop_fraction`, a trough
/// the first sample after it.
SawtoothStats sawtooth(const Trace& trace, SimTime from, double min_drop_fraction = 0.3);

/// Bottleneck occupancy samples: total X and per-VC X_i.
struct QueueTrace {
  std::string port;
  std::vector<VcId> vcs;
  std::vector<SimTime> times;
  std::vector<std::uint32_t> total;
  std::vector<std::vector<std::uint32_t>> per_vc;  // [sample][vc index]
};

// ---------------------------------------------------------------------------
// Reports.

struct ConnResult {
  ConnId conn = 0;
  std::size_t vc_index = 0;
  double goodput_mbps = 0.0;
  double avg_cwnd_bytes = 0.0;
  std::uint64_t retransmissions = 0;
  std::uint64_t fast_recoveries = 0;
  std::uint64_t timeouts = 0;
};

struct VcResult {
  VcId vc = 0;
  std::size_t index = 0;
  std::uint32_t tcps = 0;
  std::optional<std::uint64_t> threshold;
  double goodput_mbps = 0.0;
  std::optional<double> expected_mbps;
  std::optional<double> ratio;
  std::uint64_t frames_dropped = 0;
  std::uint32_t max_occupancy = 0;
};

struct GroupResult {
  std::size_t group = 0;
  std::size_t first_vc = 0;
  std::size_t vcs = 0;
  std::optional<double> threshold;  // mean per-VC threshold
  double goodput_mbps = 0.0;        // mean per-VC goodput
  std::optional<double> expected_mbps;
  std::optional<double> ratio;
};

struct ThroughputReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double measured_seconds = 0.0;
  std::vector<ConnResult> conns;
  std::vector<VcResult> vcs;
  std::vector<GroupResult> groups;
  double total_goodput_mbps = 0.0;
  double capacity_mbps = 0.0;
  double utilization = 0.0;
  std::uint32_t max_queue_cells = 0;
  std::optional<std::uint64_t> threshold_total;
  std::uint64_t timeouts = 0;

  /// max - min of the group ratios; nullopt when ratios are undefined.
  std::optional<double> ratio_spread() const;
};

/// Raw per-run measurements from which a report is built.
struct RunMeasurements {
  std::string scenario;
  std::uint64_t seed = 0;
  double measured_seconds = 0.0;
  std::vector<VcId> vcs;
  std::vector<std::uint64_t> thresholds;  // per VC; empty when unset
  std::vector<ConnResult> conns;          // goodput filled in
  std::vector<std::uint64_t> vc_frames_dropped;
  std::vector<std::uint32_t> vc_max_occupancy;
  std::uint32_t max_queue_cells = 0;
  double capacity_mbps = 0.0;
  std::uint32_t group_size = 1;
};

/// Totals, expected shares, ratios and group averages.
ThroughputReport build_report(const RunMeasurements& m);

}  // namespace gfrsim
