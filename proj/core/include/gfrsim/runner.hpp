#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gfrsim/metrics.hpp"
#include "gfrsim/topology.hpp"

namespace gfrsim {

struct RunOptions {
  bool record_traces = true;
  /// Called after the network is built and before the clock starts.
  std::function<void(Network&)> before_run;
  /// Called after the run, before the network is destroyed.
  std::function<void(Network&)> after_run;
};

struct RunArtifacts {
  ScenarioConfig config;
  ThroughputReport report;
  std::vector<Trace> cwnd;  // one per connection
  QueueTrace queue;         // bottleneck port
  std::uint64_t events = 0;
  std::uint64_t trace_hash = 0;
  std::vector<std::string> warnings;
};

/// Builds and runs one scenario. Throws ConfigError for an invalid scenario
/// and ModelError when a model invariant breaks.
RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// summary.csv, groups.csv, connections.csv, cwnd_<conn>.csv,
/// queue_<port>.csv and scenario.ini. Throws std::runtime_error when a file
/// cannot be written.
void write_run_outputs(const RunArtifacts& run, const std::filesystem::path& dir);

struct SweepSpec {
  std::string key;                  // "section.key"
  std::vector<std::string> values;  // one run per value
  unsigned jobs = 1;
};

/// One run per value of `spec.key`, in value order regardless of `jobs`.
/// Throws ConfigError for an empty value list or unknown key.
std::vector<RunArtifacts> sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                const RunOptions& opts = {});

/// run_<i>/ per run plus runs.csv and ratios.csv.
void write_sweep_outputs(const SweepSpec& spec, const std::vector<RunArtifacts>& runs,
                         const std::filesystem::path& dir);

}  // namespace gfrsim
