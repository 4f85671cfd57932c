#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gfrsim/aal5.hpp"
#include "gfrsim/drop_policy.hpp"
#include "gfrsim/event_queue.hpp"
#include "gfrsim/link.hpp"

namespace gfrsim {

inline constexpr std::uint32_t kUnboundedBuffer = std::numeric_limits<std::uint32_t>::max();

struct BufferConfig {
  std::uint32_t capacity = kUnboundedBuffer;              // K
  std::uint32_t congestion_threshold = kUnboundedBuffer;  // R, 0 <= R <= K
  bool honor_tags = false;
  bool check_invariants = false;
};

struct VcParams {
  std::uint32_t threshold = 0;
  double z = 1.5;
  double weight = 1.0;
  double mcr = 0.0;
};

enum class CellFate : std::uint8_t {
  enqueued,
  dropped_policy,    // frame rejected at its first cell
  dropped_overflow,  // buffer full (X == K); starts a partial discard
  dropped_ppd,       // remainder of a frame cut by overflow
};

struct PortStats {
  std::uint64_t cells_in = 0;
  std::uint64_t cells_out = 0;
  std::uint64_t cells_dropped = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t frames_truncated = 0;
  std::uint32_t max_occupancy = 0;
};

/// Output port of a switch: one shared FIFO buffer of K cells feeding one
/// link, with per-VC accounting and a pluggable first-cell drop policy.
/// Overflow always triggers partial packet discard for the rest of the
/// frame; cells already buffered stay.
class FifoPort : public EventHandler {
 public:
  using Observer = std::function<void(const Cell&, CellFate, std::uint32_t occupancy)>;

  FifoPort(Simulator& sim, std::string name, const LinkConfig& link, const BufferConfig& buffer,
           std::unique_ptr<DropPolicy> policy, CellSink* next_hop);

  void add_vc(VcId vc, const VcParams& params = {});
  bool has_vc(VcId vc) const;

  /// Accepts or discards an arriving cell. Throws ConfigError for a VC that
  /// was never added.
  void on_cell_arrival(Cell cell);

  std::uint32_t occupancy() const { return occupancy_; }
  std::size_t queue_length() const { return queue_.size(); }
  PortLoad load() const {
    return PortLoad{occupancy_, buffer_.congestion_threshold, buffer_.honor_tags};
  }
  const VcAccount& account(VcId vc) const;
  std::span<const VcAccount> accounts() const { return accounts_; }
  const BufferConfig& buffer() const { return buffer_; }
  const PortStats& stats() const { return stats_; }
  const std::string& name() const { return name_; }
  DropPolicy& policy() { return *policy_; }
  Link& link() { return link_; }

  void set_observer(Observer obs) { observer_ = std::move(obs); }

  /// Throws ModelError unless X == queue length == sum of X_i and X <= K.
  void check_invariants() const;

  void on_event(EventKind kind, std::uint64_t arg) override;

 private:
  std::size_t slot(VcId vc) const;
  void start_transmission();
  void note(const Cell& cell, CellFate fate) {
    if (observer_) observer_(cell, fate, occupancy_);
  }

  Simulator* sim_;
  std::string name_;
  BufferConfig buffer_;
  std::unique_ptr<DropPolicy> policy_;
  Link link_;
  std::vector<std::uint32_t> slot_of_;  // VcId -> index+1, 0 = absent
  std::vector<VcAccount> accounts_;
  std::deque<std::pair<std::uint32_t, Cell>> queue_;  // (slot, cell)
  std::uint32_t occupancy_ = 0;
  bool busy_ = false;
  PortStats stats_;
  Observer observer_;
};

}  // namespace gfrsim
