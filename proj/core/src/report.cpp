#include "gfrsim/report.hpp"

#include <cstdio>
#include <ostream>

namespace gfrsim {

namespace {

void header(std::ostream& os, const char* kind) {
  os << "# gfrsim " << kind << " schema " << kCsvSchemaVersion << '\n';
}

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return fixed6(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_summary_csv(std::ostream& os, const ThroughputReport& r) {
  header(os, "summary");
  os << "vc,tcps,threshold_cells,goodput_mbps,expected_mbps,ratio,frames_dropped,"
        "max_queue_cells\n";
  for (const auto& v : r.vcs) {
    os << v.vc << ',' << v.tcps << ',' << opt(v.threshold) << ',' << fixed6(v.goodput_mbps)
       << ',' << opt(v.expected_mbps) << ',' << opt(v.ratio) << ',' << v.frames_dropped << ','
       << v.max_occupancy << '\n';
  }
  std::uint64_t dropped = 0;
  std::uint32_t tcps = 0;
  for (const auto& v : r.vcs) {
    dropped += v.frames_dropped;
    tcps += v.tcps;
  }
  os << "total," << tcps << ',' << opt(r.threshold_total) << ',' << fixed6(r.total_goodput_mbps)
     << ',' << fixed6(r.capacity_mbps) << ',' << fixed6(r.utilization) << ',' << dropped << ','
     << r.max_queue_cells << '\n';
}

void write_groups_csv(std::ostream& os, const ThroughputReport& r) {
  header(os, "groups");
  os << "group,first_vc_index,vcs,mean_threshold_cells,goodput_mbps,expected_mbps,ratio\n";
  for (const auto& g : r.groups) {
    os << g.group << ',' << g.first_vc << ',' << g.vcs << ',' << opt(g.threshold) << ','
       << fixed6(g.goodput_mbps) << ',' << opt(g.expected_mbps) << ',' << opt(g.ratio) << '\n';
  }
}

void write_connections_csv(std::ostream& os, const ThroughputReport& r) {
  header(os, "connections");
  os << "conn,vc_index,goodput_mbps,avg_cwnd_bytes,retransmissions,fast_recoveries,timeouts\n";
  for (const auto& c : r.conns) {
    os << c.conn << ',' << c.vc_index << ',' << fixed6(c.goodput_mbps) << ','
       << fixed6(c.avg_cwnd_bytes) << ',' << c.retransmissions << ',' << c.fast_recoveries << ','
       << c.timeouts << '\n';
  }
}

void write_cwnd_csv(std::ostream& os, const Trace& t) {
  header(os, "cwnd");
  os << "time_ns,cwnd_bytes\n";
  for (const auto& p : t.points()) {
    os << p.t.ns() << ',' << static_cast<std::uint64_t>(p.value) << '\n';
  }
}

void write_queue_csv(std::ostream& os, const QueueTrace& q) {
  header(os, "queue");
  os << "time_ns,total_cells";
  for (auto vc : q.vcs) os << ",vc" << vc << "_cells";
  os << '\n';
  for (std::size_t i = 0; i < q.times.size(); ++i) {
    os << q.times[i].ns() << ',' << q.total[i];
    for (auto x : q.per_vc[i]) os << ',' << x;
    os << '\n';
  }
}

void write_ratios_csv(std::ostream& os, const std::vector<std::string>& labels,
                      const std::vector<ThroughputReport>& runs) {
  header(os, "ratios");
  os << "group";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  std::size_t groups = 0;
  for (const auto& r : runs) groups = std::max(groups, r.groups.size());
  for (std::size_t g = 0; g < groups; ++g) {
    os << g;
    for (const auto& r : runs) {
      os << ',';
      if (g < r.groups.size()) os << opt(r.groups[g].ratio);
    }
    os << '\n';
  }
}

}  // namespace gfrsim
