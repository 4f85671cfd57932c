#include <gtest/gtest.h>

#include <sstream>

#include "gfrsim/errors.hpp"
#include "gfrsim/runner.hpp"
#include "gfrsim/scenario.hpp"

namespace gfrsim {
namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

TEST(Scenario, ParsesEverySection) {
  const auto cfg = parse(R"(
[scenario]
name = demo
topology = vc_merge
n_tcp = 6
tcps_per_vc = 2

[buffer]
policy = gfr
thresholds = 100, 200*2
capacity = 5000
congestion_threshold = 4000
z = 2
weights = 0.5

[tcp]
mss = 512
delayed_ack = true

[network]
rtt = 20ms
access_delay = 500ns

[run]
duration = 1.5s
seed = 9
)");
  EXPECT_EQ(cfg.name, "demo");
  EXPECT_EQ(cfg.topology, TopologyKind::vc_merge);
  EXPECT_EQ(cfg.vc_count(), 3u);
  EXPECT_EQ(cfg.policy, PolicyKind::gfr);
  EXPECT_EQ(cfg.thresholds, (std::vector<std::uint64_t>{100, 200, 200}));
  EXPECT_EQ(cfg.buffer_cells, 5000u);
  EXPECT_EQ(cfg.resolved_congestion_threshold(), 4000u);
  EXPECT_DOUBLE_EQ(cfg.z, 2.0);
  EXPECT_DOUBLE_EQ(cfg.weight(2), 0.5);
  EXPECT_EQ(cfg.mss, 512u);
  EXPECT_TRUE(cfg.delayed_ack);
  EXPECT_EQ(cfg.rtt, SimTime::from_ms(20));
  EXPECT_EQ(cfg.access_delay, SimTime::from_ns(500));
  EXPECT_EQ(cfg.duration, SimTime::from_ms(1500));
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Scenario, MissingKeysKeepDefaults) {
  const auto cfg = parse("[run]\nseed = 3\n");
  const ScenarioConfig def;
  EXPECT_EQ(cfg.n_tcp, def.n_tcp);
  EXPECT_EQ(cfg.buffer_cells, def.buffer_cells);
  EXPECT_EQ(cfg.resolved_congestion_threshold(), 43200u);  // 0.9 K
}

TEST(Scenario, RejectsUnknownKeysSectionsAndBadValues) {
  EXPECT_THROW(parse("[buffer]\nsize = 3\n"), ConfigError);
  EXPECT_THROW(parse("[extra]\na = 1\n"), ConfigError);
  EXPECT_THROW(parse("n_tcp = 3\n"), ConfigError);
  EXPECT_THROW(parse("[scenario]\nn_tcp = many\n"), ConfigError);
  EXPECT_THROW(parse("[scenario]\ntopology = ring\n"), ConfigError);
  EXPECT_THROW(parse("[network]\nrtt = 30\n"), ConfigError);
  EXPECT_THROW(parse("[buffer]\nhonor_tags = maybe\n"), ConfigError);
  EXPECT_THROW(parse("[buffer\n"), ConfigError);
}

TEST(Scenario, IniRoundTripIsStable) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    const std::string text = to_ini(cfg);
    const auto again = parse(text);
    EXPECT_EQ(to_ini(again), text) << name;
    EXPECT_EQ(again.thresholds, cfg.thresholds) << name;
    EXPECT_EQ(again.duration, cfg.duration) << name;
  }
}

TEST(Scenario, PresetsAreValid) {
  const auto names = preset_names();
  EXPECT_EQ(names.size(), 11u);
  for (const auto& name : names) {
    EXPECT_NO_THROW(preset(name).validate()) << name;
  }
  EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Scenario, TablePresetsCarryTheirThresholds) {
  const auto t1 = preset("table1-exp1");
  ASSERT_EQ(t1.thresholds.size(), 15u);
  EXPECT_EQ(t1.thresholds[0], 305u);
  EXPECT_EQ(t1.thresholds[14], 1528u);
  const auto t4 = preset("table4-exp3");
  EXPECT_EQ(t4.topology, TopologyKind::vc_merge);
  EXPECT_EQ(t4.thresholds, (std::vector<std::uint64_t>{611, 1223, 1834, 2446, 3057}));
  EXPECT_DOUBLE_EQ(t4.z, 1.5);
  EXPECT_DOUBLE_EQ(t4.weight(4), 1.0);
}

TEST(Scenario, OverrideUsesFileSyntax) {
  auto cfg = with_override(preset("table1-exp1"), "run.seed", "77");
  EXPECT_EQ(cfg.seed, 77u);
  cfg = with_override(cfg, "buffer.thresholds", "10*15");
  EXPECT_EQ(cfg.thresholds, std::vector<std::uint64_t>(15, 10));
  EXPECT_THROW(with_override(cfg, "run.nope", "1"), ConfigError);
  EXPECT_THROW(with_override(cfg, "seed", "1"), ConfigError);
}

TEST(Scenario, EveryKeyIsOverridable) {
  const auto text = to_ini(ScenarioConfig{});
  for (const auto& key : scenario_keys()) {
    const auto dot = key.find('.');
    ASSERT_NE(dot, std::string::npos) << key;
    EXPECT_NE(text.find(key.substr(dot + 1) + " ="), std::string::npos) << key;
  }
}

TEST(Durations, ParseAndFormat) {
  EXPECT_EQ(parse_duration("30ms"), SimTime::from_ms(30));
  EXPECT_EQ(parse_duration("1.5s"), SimTime::from_ms(1500));
  EXPECT_EQ(parse_duration("250us"), SimTime::from_us(250));
  EXPECT_EQ(parse_duration("7ns"), SimTime::from_ns(7));
  EXPECT_THROW(parse_duration("10"), ConfigError);
  EXPECT_THROW(parse_duration("1h"), ConfigError);
  EXPECT_EQ(format_duration(SimTime::from_ms(30)), "30ms");
  EXPECT_EQ(format_duration(SimTime::from_ms(10000)), "10s");
  EXPECT_EQ(format_duration(SimTime::from_ns(1500)), "1500ns");
  for (std::int64_t ns : {1LL, 999LL, 1000LL, 123456789LL, 20000000000LL}) {
    EXPECT_EQ(parse_duration(format_duration(SimTime::from_ns(ns))), SimTime::from_ns(ns));
  }
}

TEST(Sweep, EmptyValueListIsConfigError) {
  SweepSpec spec;
  spec.key = "run.seed";
  EXPECT_THROW(sweep(preset("fig3-a"), spec), ConfigError);
}

}  // namespace
}  // namespace gfrsim
