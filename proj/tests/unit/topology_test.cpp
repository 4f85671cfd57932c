#include <gtest/gtest.h>

#include "gfrsim/errors.hpp"
#include "gfrsim/topology.hpp"

namespace gfrsim {
namespace {

ScenarioConfig one_tcp(TopologyKind kind) {
  ScenarioConfig cfg;
  cfg.topology = kind;
  cfg.n_tcp = 1;
  cfg.tcps_per_vc = 1;
  cfg.policy = PolicyKind::off;
  cfg.start_spread = SimTime{};
  return cfg;
}

// Time the first ACK reaches the sender, found by stepping the clock.
SimTime first_ack_time(Network& net) {
  const TcpSender& s = *net.connections.at(0).sender->sender();
  SimTime t = SimTime::from_ms(29);
  net.sim.run_until(t);
  EXPECT_EQ(s.state().snd_una, 0u);
  while (s.state().snd_una == 0 && t < SimTime::from_ms(32)) {
    t = t + SimTime::from_ns(100);
    net.sim.run_until(t);
  }
  return t;
}

double cell_time_us() { return LinkConfig{}.cell_time_seconds() * 1e6; }

TEST(Topology, NSourceUnloadedRttIsPropagationPlusSerialization) {
  auto net = build_network(one_tcp(TopologyKind::n_source));
  const double rtt_us = first_ack_time(*net).ns() / 1e3;
  // 23 cells onto the first hop, one cell per further hop, then one ACK
  // cell across three hops.
  const double expect_us = 30000.0 + (23 + 2 + 3) * cell_time_us();
  EXPECT_NEAR(rtt_us, expect_us, 0.5);
}

TEST(Topology, VcMergeUnloadedRttIsBoundedByHops) {
  auto net = build_network(one_tcp(TopologyKind::vc_merge));
  EXPECT_EQ(net->hops_one_way, 5u);
  const double rtt_us = first_ack_time(*net).ns() / 1e3;
  EXPECT_GT(rtt_us, 30000.0 + (23 + 4 + 5) * cell_time_us() - 0.5);
  // Worst case: store and forward of the whole frame at every hop.
  EXPECT_LT(rtt_us, 30000.0 + (23 * 5 + 5) * cell_time_us() + 0.5);
}

TEST(Topology, DescribeIsDeterministicPerSeed) {
  ScenarioConfig cfg;
  cfg.seed = 42;
  auto a = build_network(cfg);
  auto b = build_network(cfg);
  EXPECT_EQ(a->describe(), b->describe());
  cfg.seed = 43;
  auto c = build_network(cfg);
  EXPECT_NE(a->describe(), c->describe());  // start times differ
}

TEST(Topology, NSourceHasOneBottleneckVcPerConnection) {
  ScenarioConfig cfg;
  auto net = build_network(cfg);
  EXPECT_EQ(net->connections.size(), 15u);
  EXPECT_EQ(net->bottleneck_vcs.size(), 15u);
  EXPECT_EQ(net->bottleneck->accounts().size(), 15u);
  for (const auto& c : net->connections) {
    EXPECT_LT(c.start, cfg.start_spread);
  }
}

TEST(Topology, VcMergeGroupsConnectionsOntoVcs) {
  ScenarioConfig cfg;
  cfg.topology = TopologyKind::vc_merge;
  cfg.n_tcp = 15;
  cfg.tcps_per_vc = 3;
  cfg.policy = PolicyKind::gfr;
  cfg.thresholds = {152, 305, 458, 611, 764};
  auto net = build_network(cfg);
  EXPECT_EQ(net->bottleneck_vcs.size(), 5u);
  EXPECT_EQ(net->bottleneck->accounts().size(), 5u);
  for (const auto& c : net->connections) EXPECT_EQ(c.vc_index, c.id / 3);
  EXPECT_EQ(net->bottleneck->account(net->bottleneck_vcs[2]).threshold, 458u);
}

TEST(Topology, McrThresholdsAreProportional) {
  ScenarioConfig cfg;
  cfg.n_tcp = 3;
  cfg.policy = PolicyKind::threshold;
  cfg.mcr = {1.0, 2.0, 3.0};
  cfg.mcr_threshold_total = 600;
  EXPECT_EQ(cfg.resolved_thresholds(), (std::vector<std::uint64_t>{100, 200, 300}));
}

TEST(Topology, ValidationRejectsBadConfigs) {
  auto expect_bad = [](auto mutate) {
    ScenarioConfig cfg;
    mutate(cfg);
    EXPECT_THROW(build_network(cfg), ConfigError);
  };
  expect_bad([](ScenarioConfig& c) { c.n_tcp = 0; });
  expect_bad([](ScenarioConfig& c) { c.tcps_per_vc = 4; });
  expect_bad([](ScenarioConfig& c) { c.policy = PolicyKind::threshold; });
  expect_bad([](ScenarioConfig& c) { c.congestion_threshold = 48001; });
  expect_bad([](ScenarioConfig& c) { c.rtt = SimTime::from_us(3); });
  expect_bad([](ScenarioConfig& c) { c.host_rate_bps = c.link_rate_bps + 1; });
  expect_bad([](ScenarioConfig& c) { c.mss = 9180; });
  expect_bad([](ScenarioConfig& c) {
    c.policy = PolicyKind::gfr;
    c.thresholds.assign(15, 100);
    c.z = 1.0;
  });
  expect_bad([](ScenarioConfig& c) {
    c.policy = PolicyKind::gfr;
    c.thresholds.assign(15, 100);
    c.weights = {0.5, 0.5};
  });
  expect_bad([](ScenarioConfig& c) { c.duration = SimTime{}; });
}

TEST(Topology, OversubscribedThresholdsWarn) {
  ScenarioConfig cfg;
  cfg.policy = PolicyKind::threshold;
  cfg.thresholds.assign(15, 4000);
  const auto warnings = cfg.validate();
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("exceeds"), std::string::npos);
}

}  // namespace
}  // namespace gfrsim
