#include "gfrsim/drop_policy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gfrsim/errors.hpp"

namespace gfrsim {

namespace {

void require_ramp_params(const VcAccount& vc) {
  if (vc.threshold == 0) {
    throw ConfigError("gfr: VC " + std::to_string(vc.vc) + " has a zero threshold");
  }
  if (!(vc.z > 1.0)) {
    throw ConfigError("gfr: VC " + std::to_string(vc.vc) + " needs Z > 1");
  }
}

}  // namespace

double drop_probability(const VcAccount& vc) {
  require_ramp_params(vc);
  const double x = vc.occupancy;
  const double r = vc.threshold;
  if (x < r || x > vc.z * r) {
    throw std::domain_error("drop_probability: occupancy " + std::to_string(vc.occupancy) +
                            " outside [R_i, Z*R_i]");
  }
  const double p = vc.weight * (x - r) / (r * (vc.z - 1.0));
  return std::clamp(p, 0.0, vc.weight);
}

DropDecision gfr_first_cell_decision(const PortLoad& port, const VcAccount& vc,
                                     const Cell& cell, double u) {
  require_ramp_params(vc);
  const bool below_r = port.occupancy < port.congestion_threshold;
  if (vc.occupancy < vc.threshold && below_r) return DropDecision::accept_frame;

  const bool tagged = port.honor_tags && cell.tagged;
  const double cap = vc.z * static_cast<double>(vc.threshold);
  if (below_r && static_cast<double>(vc.occupancy) < cap && !tagged &&
      u > drop_probability(vc)) {
    return DropDecision::accept_frame;
  }
  return DropDecision::drop_frame;
}

DropDecision threshold_crossing_decision(VcAccount& vc, const Cell& /*cell*/) {
  if (vc.armed && vc.occupancy >= vc.threshold) {
    vc.armed = false;
    return DropDecision::drop_frame;
  }
  return DropDecision::accept_frame;
}

DropDecision ThresholdCrossingPolicy::on_first_cell(const PortLoad&, VcAccount& vc,
                                                    const Cell& cell) {
  return threshold_crossing_decision(vc, cell);
}

void ThresholdCrossingPolicy::on_dequeue(VcAccount& vc) {
  if (!vc.armed && vc.occupancy < vc.threshold) vc.armed = true;
}

void ThresholdCrossingPolicy::validate(const VcAccount& vc) const {
  if (vc.threshold == 0) {
    throw ConfigError("threshold policy: VC " + std::to_string(vc.vc) +
                      " has a zero threshold");
  }
}

DropDecision GfrPolicy::on_first_cell(const PortLoad& port, VcAccount& vc, const Cell& cell) {
  // Only the ramp region consumes a random draw.
  const bool ramp = port.occupancy < port.congestion_threshold &&
                    vc.occupancy >= vc.threshold &&
                    static_cast<double>(vc.occupancy) < vc.z * vc.threshold &&
                    !(port.honor_tags && cell.tagged);
  double u = 1.0;
  if (ramp) {
    u = rng_.next_uniform();
    ++draws_;
  }
  return gfr_first_cell_decision(port, vc, cell, u);
}

void GfrPolicy::validate(const VcAccount& vc) const {
  require_ramp_params(vc);
  if (vc.weight < 0.0 || vc.weight > 1.0) {
    throw ConfigError("gfr: VC " + std::to_string(vc.vc) + " weight must lie in [0, 1]");
  }
}

void WindowThresholdPolicy::watch(VcId vc, std::function<std::uint64_t()> window_bytes,
                                  std::uint64_t threshold_bytes) {
  if (threshold_bytes == 0) throw ConfigError("window policy: zero threshold");
  watches_[vc] = Watch{std::move(window_bytes), threshold_bytes, true};
}

DropDecision WindowThresholdPolicy::on_first_cell(const PortLoad&, VcAccount& vc,
                                                  const Cell&) {
  auto it = watches_.find(vc.vc);
  if (it == watches_.end()) return DropDecision::accept_frame;
  Watch& w = it->second;
  const std::uint64_t window = w.window();
  if (!w.armed && window < w.threshold) w.armed = true;
  if (w.armed && window >= w.threshold) {
    w.armed = false;
    return DropDecision::drop_frame;
  }
  return DropDecision::accept_frame;
}

}  // namespace gfrsim
