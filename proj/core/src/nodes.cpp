#include "gfrsim/nodes.hpp"

#include <algorithm>
#include <string>

#include "gfrsim/errors.hpp"

namespace gfrsim {

// ---------------------------------------------------------------- Host

Host::Host(Simulator& sim, std::string name, FrameIdSource& ids, std::uint32_t mfs,
           const LinkConfig& access, CellSink* next_hop)
    : sim_(&sim),
      name_(std::move(name)),
      segmenter_(ids, mfs),
      nic_(sim, name_ + ".nic", access, BufferConfig{}, nullptr, next_hop) {}

TcpSender& Host::make_sender(ConnId conn, VcId out_vc, const TcpConfig& cfg) {
  if (sender_ || receiver_) throw ConfigError("host " + name_ + ": endpoint already set");
  out_vc_ = out_vc;
  nic_.add_vc(out_vc);
  return sender_.emplace(conn, cfg);
}

TcpReceiver& Host::make_receiver(ConnId conn, VcId out_vc, const TcpConfig& cfg) {
  if (sender_ || receiver_) throw ConfigError("host " + name_ + ": endpoint already set");
  out_vc_ = out_vc;
  nic_.add_vc(out_vc);
  return receiver_.emplace(conn, cfg);
}

void Host::start_at(SimTime t) {
  if (!sender_) throw ConfigError("host " + name_ + ": start_at without a sender");
  sim_->schedule(t, *this, EventKind::app_send);
}

void Host::transmit(const Segment& seg) {
  for (Cell& c : segmenter_.segment_tcp(out_vc_, seg)) nic_.on_cell_arrival(std::move(c));
}

void Host::transmit(const std::vector<Segment>& segs) {
  for (const Segment& s : segs) transmit(s);
}

void Host::sync_timers() {
  const SimTime now = sim_->now();
  auto sync = [&](std::optional<SimTime> want, std::optional<SimTime>& have,
                  EventHandle& ev, Timer which) {
    if (want == have) return;
    if (ev) sim_->cancel(ev);
    ev = {};
    have = want;
    if (want) ev = sim_->schedule(std::max(*want, now), *this, EventKind::timer, which);
  };
  if (sender_) sync(sender_->rto_deadline(), rto_at_, rto_event_, kRto);
  if (receiver_) sync(receiver_->delack_deadline(), delack_at_, delack_event_, kDelack);
}

void Host::receive_cell(Cell cell) {
  auto frame = reasm_.accept(cell);
  if (!frame) return;
  const Segment& seg = (*frame)->segment;
  const SimTime now = sim_->now();
  if (sender_) {
    if (!seg.is_ack || seg.conn != sender_->conn()) {
      throw ModelError("host " + name_ + ": misrouted frame");
    }
    transmit(sender_->on_ack(seg, now));
  } else if (receiver_) {
    if (seg.is_ack || seg.conn != receiver_->conn()) {
      throw ModelError("host " + name_ + ": misrouted frame");
    }
    if (auto ack = receiver_->on_data_segment(seg, now)) transmit(*ack);
  }
  sync_timers();
}

void Host::on_event(EventKind kind, std::uint64_t arg) {
  const SimTime now = sim_->now();
  if (kind == EventKind::app_send) {
    transmit(sender_->on_app_data(now));
  } else if (kind == EventKind::timer && arg == kRto) {
    rto_event_ = {};
    rto_at_.reset();
    auto deadline = sender_->rto_deadline();
    if (deadline && *deadline <= now) transmit(sender_->on_timeout(now));
  } else if (kind == EventKind::timer && arg == kDelack) {
    delack_event_ = {};
    delack_at_.reset();
    if (auto ack = receiver_->on_delack_timeout(now)) transmit(*ack);
  }
  sync_timers();
}

// ---------------------------------------------------------------- Switch

Switch::Switch(Simulator& sim, std::string name) : sim_(&sim), name_(std::move(name)) {}

FifoPort& Switch::add_port(std::string name, const LinkConfig& link, const BufferConfig& buffer,
                           std::unique_ptr<DropPolicy> policy, CellSink* next_hop) {
  ports_.push_back(std::make_unique<FifoPort>(*sim_, name_ + "." + name, link, buffer,
                                              std::move(policy), next_hop));
  return *ports_.back();
}

void Switch::route(VcId vc, FifoPort& port, const VcParams& params) {
  if (routes_.size() <= vc) routes_.resize(vc + 1, nullptr);
  if (routes_[vc] != nullptr) throw ConfigError("switch " + name_ + ": VC routed twice");
  port.add_vc(vc, params);
  routes_[vc] = &port;
}

void Switch::receive_cell(Cell cell) {
  if (cell.vc >= routes_.size() || routes_[cell.vc] == nullptr) {
    throw ConfigError("switch " + name_ + ": no route for VC " + std::to_string(cell.vc));
  }
  routes_[cell.vc]->on_cell_arrival(std::move(cell));
}

// ---------------------------------------------------------------- EdgeDevice

namespace {
std::uint64_t route_key(ConnId conn, bool ack) {
  return (std::uint64_t{conn} << 1) | (ack ? 1U : 0U);
}
}  // namespace

EdgeDevice::EdgeDevice(Simulator& sim, std::string name) : sim_(&sim), name_(std::move(name)) {}

std::size_t EdgeDevice::add_output(const LinkConfig& link, std::size_t inputs,
                                   CellSink* next_hop) {
  outputs_.push_back(std::make_unique<Output>(*sim_, link, inputs, next_hop));
  return outputs_.size() - 1;
}

void EdgeDevice::add_route(ConnId conn, bool ack, std::size_t output, std::size_t input,
                           VcId out_vc) {
  if (output >= outputs_.size() || input >= outputs_[output]->sched.inputs()) {
    throw ConfigError("edge " + name_ + ": route to a nonexistent output/input");
  }
  if (!routes_.emplace(route_key(conn, ack), Route{output, input, out_vc}).second) {
    throw ConfigError("edge " + name_ + ": duplicate route");
  }
}

void EdgeDevice::receive_cell(Cell cell) {
  auto frame = reasm_.accept(cell);
  if (!frame) return;
  const Frame& f = **frame;
  auto it = routes_.find(route_key(f.conn, f.segment.is_ack));
  if (it == routes_.end()) {
    throw ConfigError("edge " + name_ + ": no route for conn " + std::to_string(f.conn));
  }
  Output& out = *outputs_[it->second.output];
  out.sched.enqueue(it->second.input, std::move(*frame), it->second.out_vc);
  out.kick();
}

void EdgeDevice::Output::kick() {
  if (busy) return;
  auto cell = sched.next_cell();
  if (!cell) return;
  busy = true;
  sim->schedule(link.transmit(std::move(*cell)), *this, EventKind::link_ready);
}

}  // namespace gfrsim
