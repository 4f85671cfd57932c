#include "gfrsim/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gfrsim/aal5.hpp"
#include "gfrsim/errors.hpp"

namespace gfrsim {

double throughput_from_cwnd(double avg_cwnd_bytes, double rtt_seconds) {
  if (!(rtt_seconds > 0.0)) throw std::invalid_argument("throughput_from_cwnd: rtt must be > 0");
  return 8e-6 * avg_cwnd_bytes / rtt_seconds;
}

double avg_cwnd_linear_phase(double cwnd_max, double mss, std::uint64_t rounds) {
  if (rounds == 0) throw std::invalid_argument("avg_cwnd_linear_phase: zero rounds");
  return cwnd_max / 2.0 + mss * (static_cast<double>(rounds) + 1.0) / 2.0;
}

std::uint64_t linear_phase_rounds(double cwnd_max, double mss) {
  if (!(mss > 0.0)) throw std::invalid_argument("linear_phase_rounds: mss must be > 0");
  return static_cast<std::uint64_t>(cwnd_max / (2.0 * mss));
}

double fifo_share(double x_i, double x, double mu) {
  if (!(x > 0.0)) throw std::invalid_argument("fifo_share: total occupancy must be > 0");
  return mu * x_i / x;
}

double expected_share(double mu, double r_i, double r_total) {
  if (!(r_total > 0.0)) throw std::invalid_argument("expected_share: total threshold must be > 0");
  return mu * r_i / r_total;
}

double tcp_capacity_mbps(std::uint64_t link_rate_bps, std::uint32_t mss) {
  const double cells = cells_for_frame(mss + kTcpIpHeaderBytes);
  return static_cast<double>(link_rate_bps) * 1e-6 * mss / (cells * kCellWireBytes);
}

void Trace::add(SimTime t, double value) {
  if (!points_.empty() && t <= points_.back().t) {
    throw ModelError("trace " + name_ + ": timestamps must increase");
  }
  points_.push_back({t, value});
}

double time_weighted_mean(const Trace& trace, SimTime from, SimTime to) {
  auto pts = trace.points();
  if (pts.empty() || to <= from) return 0.0;
  double area = 0.0;
  double span = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const SimTime a = std::max(pts[i].t, from);
    const SimTime b = std::min(i + 1 < pts.size() ? pts[i + 1].t : to, to);
    if (b <= a) continue;
    const double dt = (b - a).seconds();
    area += pts[i].value * dt;
    span += dt;
  }
  return span > 0.0 ? area / span : 0.0;
}

SawtoothStats sawtooth(const Trace& trace, SimTime from, double min_drop_fraction) {
  SawtoothStats st;
  auto pts = trace.points();
  double peaks = 0.0;
  double troughs = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i - 1].t < from) continue;
    const double prev = pts[i - 1].value;
    if (pts[i].value < prev * (1.0 - min_drop_fraction)) {
      // Follow the fall to its bottom.
      std::size_t j = i;
      while (j + 1 < pts.size() && pts[j + 1].value < pts[j].value) ++j;
      peaks += prev;
      troughs += pts[j].value;
      ++st.cycles;
      i = j;
    }
  }
  if (st.cycles > 0) {
    st.mean_peak = peaks / static_cast<double>(st.cycles);
    st.mean_trough = troughs / static_cast<double>(st.cycles);
  }
  return st;
}

std::optional<double> ThroughputReport::ratio_spread() const {
  std::optional<double> lo;
  std::optional<double> hi;
  for (const auto& g : groups) {
    if (!g.ratio) continue;
    lo = lo ? std::min(*lo, *g.ratio) : *g.ratio;
    hi = hi ? std::max(*hi, *g.ratio) : *g.ratio;
  }
  if (!lo) return std::nullopt;
  return *hi - *lo;
}

ThroughputReport build_report(const RunMeasurements& m) {
  ThroughputReport r;
  r.scenario = m.scenario;
  r.seed = m.seed;
  r.measured_seconds = m.measured_seconds;
  r.conns = m.conns;
  r.capacity_mbps = m.capacity_mbps;
  r.max_queue_cells = m.max_queue_cells;

  const std::size_t nvc = m.vcs.size();
  const bool have_thresholds = m.thresholds.size() == nvc && nvc > 0;
  r.vcs.resize(nvc);
  for (std::size_t v = 0; v < nvc; ++v) {
    r.vcs[v].vc = m.vcs[v];
    r.vcs[v].index = v;
    if (v < m.vc_frames_dropped.size()) r.vcs[v].frames_dropped = m.vc_frames_dropped[v];
    if (v < m.vc_max_occupancy.size()) r.vcs[v].max_occupancy = m.vc_max_occupancy[v];
    if (have_thresholds) r.vcs[v].threshold = m.thresholds[v];
  }
  for (const auto& c : m.conns) {
    VcResult& vr = r.vcs.at(c.vc_index);
    vr.goodput_mbps += c.goodput_mbps;
    ++vr.tcps;
    r.total_goodput_mbps += c.goodput_mbps;
    r.timeouts += c.timeouts;
  }
  if (r.capacity_mbps > 0.0) r.utilization = r.total_goodput_mbps / r.capacity_mbps;

  if (have_thresholds) {
    const auto total = std::accumulate(m.thresholds.begin(), m.thresholds.end(), std::uint64_t{0});
    r.threshold_total = total;
    for (auto& vr : r.vcs) {
      vr.expected_mbps = expected_share(r.total_goodput_mbps, static_cast<double>(*vr.threshold),
                                        static_cast<double>(total));
      if (*vr.expected_mbps > 0.0) vr.ratio = vr.goodput_mbps / *vr.expected_mbps;
    }
  }

  const std::size_t gsize = std::max<std::uint32_t>(1, m.group_size);
  for (std::size_t first = 0, g = 0; first < nvc; first += gsize, ++g) {
    GroupResult gr;
    gr.group = g;
    gr.first_vc = first;
    gr.vcs = std::min(gsize, nvc - first);
    double good = 0.0;
    double expect = 0.0;
    double thr = 0.0;
    for (std::size_t v = first; v < first + gr.vcs; ++v) {
      good += r.vcs[v].goodput_mbps;
      if (have_thresholds) {
        expect += *r.vcs[v].expected_mbps;
        thr += static_cast<double>(*r.vcs[v].threshold);
      }
    }
    const double n = static_cast<double>(gr.vcs);
    gr.goodput_mbps = good / n;
    if (have_thresholds) {
      gr.threshold = thr / n;
      gr.expected_mbps = expect / n;
      if (expect > 0.0) gr.ratio = good / expect;
    }
    r.groups.push_back(gr);
  }
  return r;
}

}  // namespace gfrsim
