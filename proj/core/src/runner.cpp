#include "gfrsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "gfrsim/errors.hpp"
#include "gfrsim/report.hpp"
#include "gfrsim/scenario.hpp"

namespace gfrsim {

namespace {

void sample(Network& net, RunArtifacts& out) {
  const SimTime now = net.sim.now();
  for (std::size_t i = 0; i < net.connections.size(); ++i) {
    const TcpSender* s = net.connections[i].sender->sender();
    out.cwnd[i].add(now, static_cast<double>(s->state().cwnd));
  }
  QueueTrace& q = out.queue;
  q.times.push_back(now);
  q.total.push_back(net.bottleneck->occupancy());
  std::vector<std::uint32_t> row;
  row.reserve(q.vcs.size());
  for (auto vc : q.vcs) row.push_back(net.bottleneck->account(vc).occupancy);
  q.per_vc.push_back(std::move(row));
}

void schedule_sampler(Network& net, RunArtifacts& out, SimTime at, SimTime end) {
  if (at > end) return;
  net.sim.schedule(at, [&net, &out, at, end] {
    sample(net, out);
    schedule_sampler(net, out, at + net.config.trace_interval, end);
  });
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void check_written(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

template <typename Fn>
void write_file(const std::filesystem::path& p, Fn fn) {
  auto os = open_out(p);
  fn(os);
  check_written(os, p);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  RunArtifacts out;
  out.config = cfg;
  out.warnings = cfg.validate();
  auto net = build_network(cfg);

  const SimTime end = cfg.duration;
  const SimTime warmup =
      SimTime::from_ns(static_cast<std::int64_t>(cfg.warmup_fraction * static_cast<double>(end.ns())));

  out.queue.port = "sw1.fwd";
  out.queue.vcs = net->bottleneck_vcs;
  for (const auto& c : net->connections) out.cwnd.emplace_back("cwnd_" + std::to_string(c.id));
  if (opts.record_traces) schedule_sampler(*net, out, SimTime{}, end);

  std::vector<std::uint64_t> delivered_at_warmup(net->connections.size(), 0);
  net->sim.schedule(warmup, [&] {
    for (std::size_t i = 0; i < net->connections.size(); ++i) {
      delivered_at_warmup[i] = net->connections[i].receiver->receiver()->unique_bytes_received();
    }
  });

  if (opts.before_run) opts.before_run(*net);
  net->sim.run_until(end);
  if (opts.after_run) opts.after_run(*net);

  RunMeasurements m;
  m.scenario = cfg.name;
  m.seed = cfg.seed;
  m.measured_seconds = (end - warmup).seconds();
  m.vcs = net->bottleneck_vcs;
  if (cfg.threshold_basis == ThresholdBasis::occupancy) m.thresholds = net->thresholds;
  m.capacity_mbps = tcp_capacity_mbps(cfg.link_rate_bps, cfg.mss);
  m.group_size = cfg.group_size;
  m.max_queue_cells = net->bottleneck->stats().max_occupancy;
  for (auto vc : net->bottleneck_vcs) {
    const VcAccount& a = net->bottleneck->account(vc);
    m.vc_frames_dropped.push_back(a.frames_dropped + a.frames_truncated);
    m.vc_max_occupancy.push_back(a.max_occupancy);
  }
  for (std::size_t i = 0; i < net->connections.size(); ++i) {
    const ConnectionInfo& c = net->connections[i];
    const TcpSender& s = *c.sender->sender();
    ConnResult r;
    r.conn = c.id;
    r.vc_index = c.vc_index;
    const std::uint64_t bytes =
        c.receiver->receiver()->unique_bytes_received() - delivered_at_warmup[i];
    r.goodput_mbps = m.measured_seconds > 0.0
                         ? 8e-6 * static_cast<double>(bytes) / m.measured_seconds
                         : 0.0;
    if (!out.cwnd[i].empty()) r.avg_cwnd_bytes = time_weighted_mean(out.cwnd[i], warmup, end);
    r.retransmissions = s.stats().retransmissions;
    r.fast_recoveries = s.stats().fast_recoveries;
    r.timeouts = s.stats().timeouts;
    m.conns.push_back(r);
  }
  out.report = build_report(m);
  out.events = net->sim.processed();
  out.trace_hash = net->sim.trace_hash();
  return out;
}

void write_run_outputs(const RunArtifacts& run, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "scenario.ini", [&](std::ostream& os) { os << to_ini(run.config); });
  write_file(dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, run.report); });
  write_file(dir / "groups.csv", [&](std::ostream& os) { write_groups_csv(os, run.report); });
  write_file(dir / "connections.csv",
             [&](std::ostream& os) { write_connections_csv(os, run.report); });
  for (std::size_t i = 0; i < run.cwnd.size(); ++i) {
    write_file(dir / ("cwnd_" + std::to_string(run.report.conns.at(i).conn) + ".csv"),
               [&](std::ostream& os) { write_cwnd_csv(os, run.cwnd[i]); });
  }
  write_file(dir / ("queue_" + run.queue.port + ".csv"),
             [&](std::ostream& os) { write_queue_csv(os, run.queue); });
}

std::vector<RunArtifacts> sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                const RunOptions& opts) {
  if (spec.values.empty()) throw ConfigError("sweep over '" + spec.key + "' has no values");
  std::vector<ScenarioConfig> configs;
  for (const auto& v : spec.values) {
    configs.push_back(with_override(base, spec.key, v));
    (void)configs.back().validate();
  }

  std::vector<RunArtifacts> runs(configs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        runs[i] = run_scenario(configs[i], opts);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(spec.jobs, 1, static_cast<unsigned>(configs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return runs;
}

void write_sweep_outputs(const SweepSpec& spec, const std::vector<RunArtifacts>& runs,
                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::string> labels;
  std::vector<ThroughputReport> reports;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    labels.push_back("run_" + std::to_string(i));
    reports.push_back(runs[i].report);
    write_run_outputs(runs[i], dir / labels.back());
  }
  write_file(dir / "ratios.csv",
             [&](std::ostream& os) { write_ratios_csv(os, labels, reports); });
  write_file(dir / "runs.csv", [&](std::ostream& os) {
    os << "# gfrsim runs schema " << kCsvSchemaVersion << '\n';
    os << "run," << csv_quote(spec.key)
       << ",total_goodput_mbps,utilization,max_queue_cells,ratio_spread\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i].report;
      const auto spread = r.ratio_spread();
      os << labels[i] << ',' << csv_quote(spec.values.at(i)) << ',' << fixed6(r.total_goodput_mbps)
         << ',' << fixed6(r.utilization) << ',' << r.max_queue_cells << ','
         << (spread ? fixed6(*spread) : std::string()) << '\n';
    }
  });
}

}  // namespace gfrsim
