#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <unordered_map>

#include "gfrsim/aal5.hpp"
#include "gfrsim/random.hpp"
#include "gfrsim/types.hpp"

namespace gfrsim {

enum class FrameState : std::uint8_t { idle, accepting, discarding };
enum class DropDecision : std::uint8_t { accept_frame, drop_frame };

/// Per-VC accounting at one output port.
struct VcAccount {
  VcId vc = 0;
  std::uint32_t occupancy = 0;  // X_i, cells currently buffered
  std::uint32_t threshold = 0;  // R_i in cells
  double z = 1.5;               // R_i scaling, Z > 1
  double weight = 1.0;          // W_i in [0, 1]
  double mcr = 0.0;             // cells/s, informational
  FrameState frame_state = FrameState::idle;
  bool ppd = false;    // current frame is being cut short by overflow
  bool armed = true;   // edge detector for threshold crossing

  std::uint32_t max_occupancy = 0;
  std::uint64_t frames_seen = 0;
  std::uint64_t frames_dropped = 0;  // by policy decision
  std::uint64_t frames_truncated = 0;  // by overflow
  std::uint64_t cells_enqueued = 0;
  std::uint64_t cells_dropped = 0;
};

/// Port state a first-cell decision looks at.
struct PortLoad {
  std::uint32_t occupancy = 0;             // X
  std::uint32_t congestion_threshold = 0;  // R
  bool honor_tags = false;
};

/// W_i (X_i - R_i) / (R_i (Z - 1)), clamped to [0, W_i].
/// Requires R_i <= X_i <= Z R_i; throws std::domain_error otherwise and
/// ConfigError when Z <= 1 or R_i == 0.
double drop_probability(const VcAccount& vc);

/// Probabilistic GFR buffer rule applied to the first cell of a frame.
/// Comparisons are strict, so X_i == R_i already lands on the ramp and
/// X == R always means EPD.
DropDecision gfr_first_cell_decision(const PortLoad& port, const VcAccount& vc,
                                     const Cell& cell, double u);

/// Single-drop threshold rule: drop one frame per upward crossing of the
/// VC's threshold, then accept until the edge detector re-arms.
DropDecision threshold_crossing_decision(VcAccount& vc, const Cell& cell);

class DropPolicy {
 public:
  virtual ~DropPolicy() = default;

  virtual DropDecision on_first_cell(const PortLoad& port, VcAccount& vc,
                                     const Cell& cell) = 0;
  virtual void on_dequeue(VcAccount& /*vc*/) {}
  /// Rejects VC parameters the policy cannot work with.
  virtual void validate(const VcAccount& /*vc*/) const {}
  virtual std::string_view name() const = 0;
};

class AcceptAllPolicy final : public DropPolicy {
 public:
  DropDecision on_first_cell(const PortLoad&, VcAccount&, const Cell&) override {
    return DropDecision::accept_frame;
  }
  std::string_view name() const override { return "off"; }
};

class ThresholdCrossingPolicy final : public DropPolicy {
 public:
  DropDecision on_first_cell(const PortLoad& port, VcAccount& vc, const Cell& cell) override;
  void on_dequeue(VcAccount& vc) override;
  void validate(const VcAccount& vc) const override;
  std::string_view name() const override { return "threshold"; }
};

class GfrPolicy final : public DropPolicy {
 public:
  explicit GfrPolicy(RandomSource rng) : rng_(std::move(rng)) {}

  DropDecision on_first_cell(const PortLoad& port, VcAccount& vc, const Cell& cell) override;
  void validate(const VcAccount& vc) const override;
  std::string_view name() const override { return "gfr"; }

  std::uint64_t draws() const { return draws_; }

 private:
  RandomSource rng_;
  std::uint64_t draws_ = 0;
};

/// Threshold crossing driven by the sender's congestion window rather than
/// buffer occupancy. The switch reads the window through a probe; this
/// stands in for a network that drops one packet whenever a connection's
/// window reaches a chosen size, which buffer accounting alone cannot see
/// for a lone connection on an uncongested path.
class WindowThresholdPolicy final : public DropPolicy {
 public:
  void watch(VcId vc, std::function<std::uint64_t()> window_bytes,
             std::uint64_t threshold_bytes);

  DropDecision on_first_cell(const PortLoad& port, VcAccount& vc, const Cell& cell) override;
  std::string_view name() const override { return "window"; }

 private:
  struct Watch {
    std::function<std::uint64_t()> window;
    std::uint64_t threshold = 0;
    bool armed = true;
  };
  std::unordered_map<VcId, Watch> watches_;
};

}  // namespace gfrsim
