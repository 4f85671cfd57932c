#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gfrsim/aal5.hpp"
#include "gfrsim/event_queue.hpp"
#include "gfrsim/fifo_port.hpp"
#include "gfrsim/link.hpp"
#include "gfrsim/nodes.hpp"
#include "gfrsim/random.hpp"
#include "gfrsim/sim_time.hpp"
#include "gfrsim/tcp.hpp"

namespace gfrsim {

enum class TopologyKind { n_source, vc_merge };
enum class PolicyKind { off, threshold, gfr };
enum class ThresholdBasis { occupancy, cwnd };

std::string to_string(TopologyKind k);
std::string to_string(PolicyKind k);
std::string to_string(ThresholdBasis k);

/// Everything needed to build and run one experiment.
struct ScenarioConfig {
  std::string name = "custom";
  TopologyKind topology = TopologyKind::n_source;
  std::uint32_t n_tcp = 15;
  std::uint32_t tcps_per_vc = 1;

  // Bottleneck buffer and policy.
  PolicyKind policy = PolicyKind::off;
  ThresholdBasis threshold_basis = ThresholdBasis::occupancy;
  /// Per-VC thresholds: cells, or bytes of congestion window for the cwnd
  /// basis. Empty when derived from `mcr`.
  std::vector<std::uint64_t> thresholds;
  /// Per-VC minimum cell rates. Used only when `thresholds` is empty:
  /// R_i = mcr_threshold_total * MCR_i / sum(MCR).
  std::vector<double> mcr;
  std::uint32_t mcr_threshold_total = 0;
  std::uint32_t buffer_cells = 48000;                 // K
  std::optional<std::uint32_t> congestion_threshold;  // R; default 0.9 K
  double z = 1.5;
  std::vector<double> weights;  // empty: 1.0 for every VC; one value: shared
  bool honor_tags = false;

  // TCP.
  std::uint32_t mss = 1024;
  std::uint32_t rcv_wnd = 37500;
  std::uint8_t wnd_scale = 4;
  bool delayed_ack = false;

  // Links.
  std::uint64_t link_rate_bps = kOc3RateBps;
  /// Rate of the links touching end hosts; 0 means link_rate_bps.
  std::uint64_t host_rate_bps = 0;
  SimTime rtt = SimTime::from_ms(30);
  SimTime access_delay = SimTime::from_us(1);
  std::uint32_t mfs = 9180;

  // Run control.
  SimTime duration = SimTime::from_ms(10'000);
  std::uint64_t seed = 1;
  SimTime start_spread = SimTime::from_ms(10);
  SimTime trace_interval = SimTime::from_ms(10);
  double warmup_fraction = 0.1;
  /// Consecutive VCs averaged together in the report.
  std::uint32_t group_size = 3;
  bool check_invariants = false;

  std::uint32_t vc_count() const { return tcps_per_vc == 0 ? 0 : n_tcp / tcps_per_vc; }
  std::uint64_t resolved_host_rate() const;
  std::uint32_t resolved_congestion_threshold() const;
  /// Per-VC thresholds after the MCR mapping.
  std::vector<std::uint64_t> resolved_thresholds() const;
  double weight(std::size_t vc_index) const;
  TcpConfig tcp() const;

  /// Throws ConfigError on an invalid configuration; returns warnings for
  /// legal but suspicious ones.
  std::vector<std::string> validate() const;
};

struct ConnectionInfo {
  ConnId id = 0;
  std::size_t vc_index = 0;  // index into Network::bottleneck_vcs
  Host* sender = nullptr;
  Host* receiver = nullptr;
  SimTime start;
};

/// A built experiment: simulator plus every node, owned together.
class Network {
 public:
  explicit Network(const ScenarioConfig& cfg);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Simulator sim;
  FrameIdSource frame_ids;
  ScenarioConfig config;
  std::vector<std::unique_ptr<Host>> hosts;
  std::vector<std::unique_ptr<Switch>> switches;
  std::vector<std::unique_ptr<EdgeDevice>> edges;
  std::vector<ConnectionInfo> connections;

  FifoPort* bottleneck = nullptr;      // first switch's backbone output
  std::vector<VcId> bottleneck_vcs;    // per VC index
  std::vector<std::uint64_t> thresholds;  // per VC index, resolved
  std::uint32_t hops_one_way = 0;
  std::vector<std::string> layout;  // construction log, see describe()

  /// Stable textual description of nodes, ports, routes and delays.
  std::string describe() const;
};

std::unique_ptr<Network> build_n_source(const ScenarioConfig& cfg);
std::unique_ptr<Network> build_vc_merge(const ScenarioConfig& cfg);
std::unique_ptr<Network> build_network(const ScenarioConfig& cfg);

}  // namespace gfrsim
