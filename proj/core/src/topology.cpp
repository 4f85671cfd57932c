#include "gfrsim/topology.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gfrsim/errors.hpp"

namespace gfrsim {

namespace {

// VC numbering. Backbone VCs are small so switch route tables stay dense.
constexpr VcId kForwardVcBase = 1;
constexpr VcId kReverseVcBase = 1001;
constexpr VcId kSrcAccessVcBase = 2001;
constexpr VcId kSrcAckVcBase = 3001;
constexpr VcId kDstAccessVcBase = 4001;
constexpr VcId kDstAckVcBase = 5001;
constexpr std::uint32_t kMaxConnections = 999;

// Independent random streams drawn from the scenario seed.
constexpr std::uint64_t kStartStream = 1;
constexpr std::uint64_t kGfrStream = 2;

std::string fmt_time(SimTime t) { return std::to_string(t.ns()) + "ns"; }

}  // namespace

std::string to_string(TopologyKind k) {
  return k == TopologyKind::n_source ? "n_source" : "vc_merge";
}

std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::off: return "off";
    case PolicyKind::threshold: return "threshold";
    case PolicyKind::gfr: return "gfr";
  }
  return "?";
}

std::string to_string(ThresholdBasis k) {
  return k == ThresholdBasis::occupancy ? "occupancy" : "cwnd";
}

std::uint64_t ScenarioConfig::resolved_host_rate() const {
  return host_rate_bps == 0 ? link_rate_bps : host_rate_bps;
}

std::uint32_t ScenarioConfig::resolved_congestion_threshold() const {
  if (congestion_threshold) return *congestion_threshold;
  return static_cast<std::uint32_t>(std::floor(0.9 * buffer_cells));
}

std::vector<std::uint64_t> ScenarioConfig::resolved_thresholds() const {
  if (!thresholds.empty() || mcr.empty()) return thresholds;
  const double total = std::accumulate(mcr.begin(), mcr.end(), 0.0);
  std::vector<std::uint64_t> out;
  out.reserve(mcr.size());
  for (double m : mcr) {
    out.push_back(static_cast<std::uint64_t>(std::llround(mcr_threshold_total * m / total)));
  }
  return out;
}

double ScenarioConfig::weight(std::size_t vc_index) const {
  if (weights.empty()) return 1.0;
  if (weights.size() == 1) return weights.front();
  return weights.at(vc_index);
}

TcpConfig ScenarioConfig::tcp() const {
  TcpConfig t;
  t.mss = mss;
  t.rcv_wnd_field = rcv_wnd;
  t.wnd_scale = wnd_scale;
  t.delayed_ack = delayed_ack;
  return t;
}

std::vector<std::string> ScenarioConfig::validate() const {
  auto fail = [this](const std::string& why) {
    throw ConfigError("scenario '" + name + "': " + why);
  };
  std::vector<std::string> warnings;

  if (n_tcp == 0 || n_tcp > kMaxConnections) fail("n_tcp must be in [1, 999]");
  if (tcps_per_vc == 0) fail("tcps_per_vc must be positive");
  if (topology == TopologyKind::n_source && tcps_per_vc != 1) {
    fail("n_source topology carries exactly one TCP per VC");
  }
  if (n_tcp % tcps_per_vc != 0) fail("n_tcp must be a multiple of tcps_per_vc");
  const std::size_t vcs = vc_count();

  if (!thresholds.empty() && thresholds.size() != vcs) {
    fail("expected " + std::to_string(vcs) + " thresholds, got " +
         std::to_string(thresholds.size()));
  }
  if (thresholds.empty() && !mcr.empty()) {
    if (mcr.size() != vcs) fail("mcr list must have one entry per VC");
    for (double m : mcr) {
      if (!(m > 0.0)) fail("mcr values must be positive");
    }
    if (mcr_threshold_total == 0) fail("mcr mapping needs mcr_threshold_total > 0");
  }
  const auto resolved = resolved_thresholds();
  if (policy != PolicyKind::off) {
    if (resolved.empty()) fail("policy '" + to_string(policy) + "' needs thresholds or mcr");
    for (auto r : resolved) {
      if (r == 0) fail("per-VC thresholds must be positive");
    }
  }
  if (threshold_basis == ThresholdBasis::cwnd && policy != PolicyKind::threshold) {
    fail("threshold_basis = cwnd only applies to the threshold policy");
  }
  if (buffer_cells == 0) fail("buffer K must be positive");
  if (resolved_congestion_threshold() > buffer_cells) fail("R must not exceed K");
  if (policy == PolicyKind::gfr && !(z > 1.0)) fail("Z must be greater than 1");
  if (!weights.empty() && weights.size() != 1 && weights.size() != vcs) {
    fail("weights must list one value or one per VC");
  }
  for (double w : weights) {
    if (w < 0.0 || w > 1.0) fail("weights must lie in [0, 1]");
  }
  if (mss == 0) fail("mss must be positive");
  if (mss + kTcpIpHeaderBytes > mfs) fail("mss plus headers exceeds the MFS");
  if (link_rate_bps == 0) fail("link rate must be positive");
  if (host_rate_bps > link_rate_bps) fail("host rate must not exceed the link rate");
  const std::int64_t access_hops = topology == TopologyKind::n_source ? 2 : 4;
  if (rtt.ns() / 2 <= access_delay.ns() * access_hops) {
    fail("rtt too small for the access link delays");
  }
  if (duration <= SimTime{}) fail("duration must be positive");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    fail("warmup_fraction must lie in [0, 1)");
  }
  if (trace_interval <= SimTime{}) fail("trace interval must be positive");
  if (start_spread < SimTime{}) fail("start spread must not be negative");
  if (group_size == 0) fail("group_size must be positive");

  if (threshold_basis == ThresholdBasis::occupancy && !resolved.empty()) {
    const auto sum = std::accumulate(resolved.begin(), resolved.end(), std::uint64_t{0});
    if (sum > buffer_cells) {
      warnings.push_back("sum of per-VC thresholds (" + std::to_string(sum) +
                         ") exceeds buffer size K (" + std::to_string(buffer_cells) + ")");
    }
  }
  return warnings;
}

Network::Network(const ScenarioConfig& cfg) : config(cfg) {}

std::string Network::describe() const {
  std::ostringstream os;
  for (const auto& line : layout) os << line << '\n';
  return os.str();
}

namespace {

struct Bottleneck {
  std::unique_ptr<DropPolicy> policy;
  WindowThresholdPolicy* window = nullptr;
};

Bottleneck make_policy(const ScenarioConfig& cfg) {
  Bottleneck b;
  switch (cfg.policy) {
    case PolicyKind::off:
      b.policy = std::make_unique<AcceptAllPolicy>();
      break;
    case PolicyKind::threshold:
      if (cfg.threshold_basis == ThresholdBasis::cwnd) {
        auto w = std::make_unique<WindowThresholdPolicy>();
        b.window = w.get();
        b.policy = std::move(w);
      } else {
        b.policy = std::make_unique<ThresholdCrossingPolicy>();
      }
      break;
    case PolicyKind::gfr:
      b.policy = std::make_unique<GfrPolicy>(RandomSource(cfg.seed).fork(kGfrStream));
      break;
  }
  return b;
}

VcParams bottleneck_params(const ScenarioConfig& cfg, const Network& net, std::size_t v) {
  VcParams p;
  if (cfg.threshold_basis == ThresholdBasis::occupancy && v < net.thresholds.size()) {
    p.threshold = static_cast<std::uint32_t>(net.thresholds[v]);
  }
  p.z = cfg.z;
  p.weight = cfg.weight(v);
  if (!cfg.mcr.empty()) p.mcr = cfg.mcr.at(v);
  return p;
}

SimTime start_time(RandomSource& rng, const ScenarioConfig& cfg) {
  return SimTime::from_ns(
      static_cast<std::int64_t>(rng.next_uniform() * static_cast<double>(cfg.start_spread.ns())));
}

void log_link(Network& net, const std::string& from, const std::string& to, const LinkConfig& l) {
  net.layout.push_back("link " + from + " -> " + to + " rate=" + std::to_string(l.rate_bps) +
                       " delay=" + fmt_time(l.prop_delay));
}

}  // namespace

std::unique_ptr<Network> build_n_source(const ScenarioConfig& cfg) {
  if (cfg.topology != TopologyKind::n_source) throw ConfigError("build_n_source: wrong topology");
  (void)cfg.validate();
  auto net = std::make_unique<Network>(cfg);
  net->thresholds = cfg.resolved_thresholds();
  net->hops_one_way = 3;

  const LinkConfig access{cfg.resolved_host_rate(), cfg.access_delay};
  const LinkConfig backbone{cfg.link_rate_bps,
                            SimTime::from_ns(cfg.rtt.ns() / 2) - cfg.access_delay * 2};
  const BufferConfig plain{cfg.buffer_cells, cfg.buffer_cells, false, cfg.check_invariants};
  const BufferConfig shaped{cfg.buffer_cells, cfg.resolved_congestion_threshold(),
                            cfg.honor_tags, cfg.check_invariants};
  const TcpConfig tcp = cfg.tcp();

  auto& sw1 = *net->switches.emplace_back(std::make_unique<Switch>(net->sim, "sw1"));
  auto& sw2 = *net->switches.emplace_back(std::make_unique<Switch>(net->sim, "sw2"));
  Bottleneck pol = make_policy(cfg);
  net->layout.push_back("policy sw1.fwd " + std::string(pol.policy->name()));
  FifoPort& fwd = sw1.add_port("fwd", backbone, shaped, std::move(pol.policy), &sw2);
  FifoPort& rev = sw2.add_port("rev", backbone, plain, nullptr, &sw1);
  log_link(*net, "sw1", "sw2", backbone);
  log_link(*net, "sw2", "sw1", backbone);
  net->bottleneck = &fwd;

  RandomSource starts = RandomSource(cfg.seed).fork(kStartStream);
  for (std::uint32_t i = 0; i < cfg.n_tcp; ++i) {
    const ConnId conn = i;
    const VcId data_vc = kForwardVcBase + i;
    const VcId ack_vc = kReverseVcBase + i;
    const std::string si = std::to_string(i);

    auto& src = *net->hosts.emplace_back(std::make_unique<Host>(
        net->sim, "src" + si, net->frame_ids, cfg.mfs, access, &sw1));
    auto& dst = *net->hosts.emplace_back(std::make_unique<Host>(
        net->sim, "dst" + si, net->frame_ids, cfg.mfs, access, &sw2));
    TcpSender& sender = src.make_sender(conn, data_vc, tcp);
    dst.make_receiver(conn, ack_vc, tcp);

    sw1.route(data_vc, fwd, bottleneck_params(cfg, *net, i));
    FifoPort& to_dst = sw2.add_port("to_dst" + si, access, plain, nullptr, &dst);
    sw2.route(data_vc, to_dst);
    sw2.route(ack_vc, rev);
    FifoPort& to_src = sw1.add_port("to_src" + si, access, plain, nullptr, &src);
    sw1.route(ack_vc, to_src);
    if (pol.window != nullptr) {
      pol.window->watch(data_vc, [&sender] { return sender.state().cwnd; },
                        net->thresholds.at(i));
    }
    log_link(*net, src.name(), "sw1", access);
    log_link(*net, "sw2", dst.name(), access);
    net->layout.push_back("conn " + si + " data_vc=" + std::to_string(data_vc) +
                          " ack_vc=" + std::to_string(ack_vc));

    const SimTime start = start_time(starts, cfg);
    src.start_at(start);
    net->layout.push_back("start conn " + si + " at " + fmt_time(start));
    net->bottleneck_vcs.push_back(data_vc);
    net->connections.push_back(ConnectionInfo{conn, i, &src, &dst, start});
  }
  return net;
}

std::unique_ptr<Network> build_vc_merge(const ScenarioConfig& cfg) {
  if (cfg.topology != TopologyKind::vc_merge) throw ConfigError("build_vc_merge: wrong topology");
  (void)cfg.validate();
  auto net = std::make_unique<Network>(cfg);
  net->thresholds = cfg.resolved_thresholds();
  net->hops_one_way = 5;

  const LinkConfig access{cfg.link_rate_bps, cfg.access_delay};
  const LinkConfig host_link{cfg.resolved_host_rate(), cfg.access_delay};
  const LinkConfig backbone{cfg.link_rate_bps,
                            SimTime::from_ns(cfg.rtt.ns() / 2) - cfg.access_delay * 4};
  const BufferConfig plain{cfg.buffer_cells, cfg.buffer_cells, false, cfg.check_invariants};
  const BufferConfig shaped{cfg.buffer_cells, cfg.resolved_congestion_threshold(),
                            cfg.honor_tags, cfg.check_invariants};
  const TcpConfig tcp = cfg.tcp();
  const std::uint32_t per_vc = cfg.tcps_per_vc;

  auto& sw1 = *net->switches.emplace_back(std::make_unique<Switch>(net->sim, "sw1"));
  auto& sw2 = *net->switches.emplace_back(std::make_unique<Switch>(net->sim, "sw2"));
  Bottleneck pol = make_policy(cfg);
  net->layout.push_back("policy sw1.fwd " + std::string(pol.policy->name()));
  FifoPort& fwd = sw1.add_port("fwd", backbone, shaped, std::move(pol.policy), &sw2);
  FifoPort& rev = sw2.add_port("rev", backbone, plain, nullptr, &sw1);
  log_link(*net, "sw1", "sw2", backbone);
  log_link(*net, "sw2", "sw1", backbone);
  net->bottleneck = &fwd;

  RandomSource starts = RandomSource(cfg.seed).fork(kStartStream);
  for (std::uint32_t v = 0; v < cfg.vc_count(); ++v) {
    const VcId fwd_vc = kForwardVcBase + v;
    const VcId rev_vc = kReverseVcBase + v;
    const std::string sv = std::to_string(v);

    auto& ledge = *net->edges.emplace_back(std::make_unique<EdgeDevice>(net->sim, "ledge" + sv));
    auto& redge = *net->edges.emplace_back(std::make_unique<EdgeDevice>(net->sim, "redge" + sv));
    const std::size_t l_up = ledge.add_output(access, per_vc, &sw1);
    const std::size_t r_up = redge.add_output(access, per_vc, &sw2);
    log_link(*net, ledge.name(), "sw1", access);
    log_link(*net, redge.name(), "sw2", access);

    sw1.route(fwd_vc, fwd, bottleneck_params(cfg, *net, v));
    FifoPort& to_redge = sw2.add_port("to_redge" + sv, access, plain, nullptr, &redge);
    sw2.route(fwd_vc, to_redge);
    sw2.route(rev_vc, rev);
    FifoPort& to_ledge = sw1.add_port("to_ledge" + sv, access, plain, nullptr, &ledge);
    sw1.route(rev_vc, to_ledge);
    net->layout.push_back("vc " + sv + " fwd_vc=" + std::to_string(fwd_vc) +
                          " rev_vc=" + std::to_string(rev_vc));

    for (std::uint32_t k = 0; k < per_vc; ++k) {
      const ConnId conn = v * per_vc + k;
      const std::string sc = std::to_string(conn);
      auto& src = *net->hosts.emplace_back(std::make_unique<Host>(
          net->sim, "src" + sc, net->frame_ids, cfg.mfs, host_link, &ledge));
      auto& dst = *net->hosts.emplace_back(std::make_unique<Host>(
          net->sim, "dst" + sc, net->frame_ids, cfg.mfs, host_link, &redge));
      TcpSender& sender = src.make_sender(conn, kSrcAccessVcBase + conn, tcp);
      dst.make_receiver(conn, kDstAckVcBase + conn, tcp);

      ledge.add_route(conn, false, l_up, k, fwd_vc);
      const std::size_t l_down = ledge.add_output(host_link, 1, &src);
      ledge.add_route(conn, true, l_down, 0, kSrcAckVcBase + conn);
      const std::size_t r_down = redge.add_output(host_link, 1, &dst);
      redge.add_route(conn, false, r_down, 0, kDstAccessVcBase + conn);
      redge.add_route(conn, true, r_up, k, rev_vc);
      if (pol.window != nullptr) {
        // Window probes are per VC; with merging only the first TCP is watched.
        if (k == 0) {
          pol.window->watch(fwd_vc, [&sender] { return sender.state().cwnd; },
                            net->thresholds.at(v));
        }
      }
      log_link(*net, src.name(), ledge.name(), host_link);
      log_link(*net, redge.name(), dst.name(), host_link);
      net->layout.push_back("conn " + sc + " vc=" + sv);

      const SimTime start = start_time(starts, cfg);
      src.start_at(start);
      net->layout.push_back("start conn " + sc + " at " + fmt_time(start));
      net->connections.push_back(ConnectionInfo{conn, v, &src, &dst, start});
    }
    net->bottleneck_vcs.push_back(fwd_vc);
  }
  return net;
}

std::unique_ptr<Network> build_network(const ScenarioConfig& cfg) {
  return cfg.topology == TopologyKind::n_source ? build_n_source(cfg) : build_vc_merge(cfg);
}

}  // namespace gfrsim
