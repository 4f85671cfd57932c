#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfrsim/aal5.hpp"
#include "gfrsim/event_queue.hpp"
#include "gfrsim/fifo_port.hpp"
#include "gfrsim/link.hpp"
#include "gfrsim/random.hpp"
#include "gfrsim/tcp.hpp"

namespace gfrsim {

/// End system running one TCP endpoint (sender or receiver) behind an
/// unbounded NIC queue on its access link.
class Host : public CellSink, public EventHandler {
 public:
  Host(Simulator& sim, std::string name, FrameIdSource& ids, std::uint32_t mfs,
       const LinkConfig& access, CellSink* next_hop = nullptr);

  TcpSender& make_sender(ConnId conn, VcId out_vc, const TcpConfig& cfg);
  TcpReceiver& make_receiver(ConnId conn, VcId out_vc, const TcpConfig& cfg);

  /// Schedules the persistent source to start sending at `t`.
  void start_at(SimTime t);

  void receive_cell(Cell cell) override;
  void on_event(EventKind kind, std::uint64_t arg) override;

  FifoPort& nic() { return nic_; }
  const std::string& name() const { return name_; }
  TcpSender* sender() { return sender_ ? &*sender_ : nullptr; }
  TcpReceiver* receiver() { return receiver_ ? &*receiver_ : nullptr; }
  const TcpSender* sender() const { return sender_ ? &*sender_ : nullptr; }
  const TcpReceiver* receiver() const { return receiver_ ? &*receiver_ : nullptr; }
  const ReassemblyStats& reassembly() const { return reasm_.stats(); }

 private:
  enum Timer : std::uint64_t { kRto = 0, kDelack = 1 };

  void transmit(const std::vector<Segment>& segs);
  void transmit(const Segment& seg);
  void sync_timers();

  Simulator* sim_;
  std::string name_;
  Segmenter segmenter_;
  FifoPort nic_;
  Reassembler reasm_;
  VcId out_vc_ = 0;
  std::optional<TcpSender> sender_;
  std::optional<TcpReceiver> receiver_;
  EventHandle rto_event_;
  std::optional<SimTime> rto_at_;
  EventHandle delack_event_;
  std::optional<SimTime> delack_at_;
};

/// Cell switch: routes each VC to one output FifoPort.
class Switch : public CellSink {
 public:
  Switch(Simulator& sim, std::string name);

  FifoPort& add_port(std::string name, const LinkConfig& link, const BufferConfig& buffer,
                     std::unique_ptr<DropPolicy> policy, CellSink* next_hop);
  void route(VcId vc, FifoPort& port, const VcParams& params = {});

  void receive_cell(Cell cell) override;

  const std::string& name() const { return name_; }
  std::size_t port_count() const { return ports_.size(); }
  FifoPort& port(std::size_t i) { return *ports_.at(i); }

 private:
  Simulator* sim_;
  std::string name_;
  std::vector<std::unique_ptr<FifoPort>> ports_;
  std::vector<FifoPort*> routes_;  // indexed by VcId
};

/// LAN/ATM edge device. Reassembles frames per incoming VC and forwards
/// whole frames by (connection, direction) to an output, where a
/// MergeScheduler keeps the frames of different connections that share an
/// output VC from interleaving. Output queues are unbounded.
class EdgeDevice : public CellSink {
 public:
  EdgeDevice(Simulator& sim, std::string name);

  std::size_t add_output(const LinkConfig& link, std::size_t inputs, CellSink* next_hop);
  void add_route(ConnId conn, bool ack, std::size_t output, std::size_t input, VcId out_vc);

  void receive_cell(Cell cell) override;

  const std::string& name() const { return name_; }
  MergeScheduler& scheduler(std::size_t output) { return outputs_.at(output)->sched; }
  Link& link(std::size_t output) { return outputs_.at(output)->link; }
  const ReassemblyStats& reassembly() const { return reasm_.stats(); }

 private:
  struct Output : EventHandler {
    Output(Simulator& sim, const LinkConfig& cfg, std::size_t inputs, CellSink* next)
        : sim(&sim), sched(inputs), link(sim, cfg, next) {}
    void kick();
    void on_event(EventKind, std::uint64_t) override {
      busy = false;
      kick();
    }
    Simulator* sim;
    MergeScheduler sched;
    Link link;
    bool busy = false;
  };
  struct Route {
    std::size_t output = 0;
    std::size_t input = 0;
    VcId out_vc = 0;
  };

  Simulator* sim_;
  std::string name_;
  Reassembler reasm_;
  std::vector<std::unique_ptr<Output>> outputs_;
  std::unordered_map<std::uint64_t, Route> routes_;
};

}  // namespace gfrsim
