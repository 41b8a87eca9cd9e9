#include "uwsn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uwsn/channel.hpp"

namespace uwsn {

bool event_before(const Event& a, const Event& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.subject != b.subject) return a.subject < b.subject;
  return a.seq < b.seq;
}

void EventQueue::push(Event e) {
  e.seq = next_seq_++;
  heap_.push(e);
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

void EventQueue::clear() {
  heap_ = {};
  next_seq_ = 0;
}

namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr double kRoundSeconds = 1.0;

BaselineKind baseline_kind(ProtocolKind p) {
  return p == ProtocolKind::Eedbr ? BaselineKind::Eedbr : BaselineKind::Dbr;
}

}  // namespace

Simulation::Simulation(NetworkConfig config, ProtocolKind protocol, std::uint64_t seed)
    : Simulation(config, protocol, generate_topology(config, seed), seed) {}

Simulation::Simulation(NetworkConfig config, ProtocolKind protocol, Topology topology, std::uint64_t seed)
    : config_(std::move(config)),
      protocol_(protocol),
      baseline_(BaselinePolicy::from_config(baseline_kind(protocol), config_)),
      channel_rng_(derive_seed(seed, kChannelStream)),
      nodes_(std::move(topology.nodes)),
      sinks_(std::move(topology.sinks)) {
  config_.validate();
  if (nodes_.size() != config_.node_count) throw std::invalid_argument("topology size differs from node_count");
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) throw std::invalid_argument("sensor ids must be 0..node_count-1 in order");
  }
  state_ = initial_state(config_.node_count, config_);
  if (protocol_ == ProtocolKind::Amctd) {
    couriers_ = std::move(topology.couriers);
    for (CourierNode& c : couriers_) {
      const TourPlan plan = tour_plan(c.index, state_.courier_phase, config_);
      c.band_top = plan.band_top;
      c.band_bottom = plan.band_bottom;
      c.speed = plan.speed;
    }
  } else {
    state_.depth_threshold = baseline_.depth_threshold;
  }
  for (const SensorNode& n : nodes_) initial_total_ += n.residual_energy;
  build_static_links();
}

void Simulation::build_static_links() {
  const std::size_t n = nodes_.size();
  physical_neighbors_.assign(n, {});
  nearest_sink_.assign(n, std::nullopt);
  sensor_entry_count_.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && in_range(nodes_[i].position, nodes_[j].position, config_)) {
        physical_neighbors_[i].push_back(j);
      }
    }
    for (std::uint32_t s = 0; s < sinks_.size(); ++s) {
      const double d = distance(nodes_[i].position, sinks_[s].position);
      if (d <= config_.tx_range && (!nearest_sink_[i] || d < nearest_sink_[i]->second)) {
        nearest_sink_[i] = std::make_pair(s, d);
      }
    }
  }
}

bool Simulation::is_hello_round(std::uint32_t round, std::uint32_t interval) {
  return interval != 0 && round % interval == 0;
}

std::uint32_t Simulation::alive_count() const {
  return static_cast<std::uint32_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const SensorNode& n) { return n.alive; }));
}

double Simulation::courier_energy() const {
  double sum = 0.0;
  for (const CourierNode& c : couriers_) sum += c.energy_ledger;
  return sum;
}

double Simulation::residual_energy_total() const {
  double sum = 0.0;
  for (const SensorNode& n : nodes_) sum += n.residual_energy;
  return sum;
}

double Simulation::charge(NodeId node, double joules) {
  SensorNode& n = nodes_[node];
  const double taken = std::min(joules, n.residual_energy);
  n.residual_energy = taken == n.residual_energy ? 0.0 : n.residual_energy - taken;
  return taken;
}

void Simulation::hello_cycle(std::uint32_t round) {
  const auto dead = static_cast<std::uint32_t>(nodes_.size()) - alive_count();
  if (protocol_ == ProtocolKind::Amctd) {
    state_ = update_state(dead, state_);
  } else {
    state_.dead_count = dead;
  }

  struct Advert {
    double weight;
    double residual;
  };
  std::vector<Advert> adverts(nodes_.size());
  for (SensorNode& n : nodes_) {
    if (!n.alive) continue;
    if (protocol_ == ProtocolKind::Amctd) n.weight = weight(n, state_, config_);
    adverts[n.id] = Advert{n.weight, n.residual_energy};
  }

  const double t_hello = transmission_time(config_.hello_payload, config_);
  const double e_tx = tx_energy(config_.hello_payload, config_);
  const double e_rx = rx_energy(config_.hello_payload, config_);
  for (SensorNode& n : nodes_) n.neighbor_table.clear();

  for (const SensorNode& sender : nodes_) {
    if (!sender.alive || sender.residual_energy <= 0.0) continue;
    round_tx_ += charge(sender.id, e_tx);
    if (!busy_.empty()) busy_[sender.id] += t_hello;
    for (NodeId r : physical_neighbors_[sender.id]) {
      SensorNode& receiver = nodes_[r];
      if (!receiver.alive || receiver.residual_energy <= 0.0) continue;
      round_rx_ += charge(r, e_rx);
      if (!busy_.empty()) busy_[r] += t_hello;
      NeighborEntry e;
      e.id = sender.id;
      e.depth = sender.depth();
      e.weight = adverts[sender.id].weight;
      e.residual_energy = adverts[sender.id].residual;
      e.distance = distance(sender.position, receiver.position);
      e.last_heard_round = round;
      receiver.neighbor_table.push_back(e);
    }
  }

  const double threshold = state_.depth_threshold;
  for (SensorNode& n : nodes_) {
    sensor_entry_count_[n.id] = n.neighbor_table.size();
    n.threshold_queue.clear();
    for (const NeighborEntry& e : n.neighbor_table) {
      if (n.depth() - e.depth >= threshold) n.threshold_queue.push_back(e.id);
    }
  }
}

void Simulation::refresh_courier_entries() {
  if (couriers_.empty()) return;
  for (SensorNode& n : nodes_) {
    n.neighbor_table.resize(sensor_entry_count_[n.id]);
    if (!n.alive) continue;
    for (const CourierNode& c : couriers_) {
      const double d = distance(n.position, c.position);
      if (d > config_.tx_range) continue;
      NeighborEntry e;
      e.id = c.id;
      e.depth = c.position.depth;
      e.distance = d;
      e.last_heard_round = round_;
      e.is_courier = true;
      n.neighbor_table.push_back(e);
    }
  }
}

Simulation::Plan Simulation::plan_for(const SensorNode& holder) const {
  Plan plan;
  if (protocol_ == ProtocolKind::Amctd) {
    plan.unicast = true;
    std::vector<NeighborEntry> eligible = eligible_neighbors(holder, state_);
    std::vector<double> weights;
    for (const NeighborEntry& e : eligible) {
      if (e.is_courier) {
        if (!plan.courier) plan.courier = e;
      } else {
        weights.push_back(e.weight);
      }
    }
    for (const NeighborEntry& e : eligible) {
      if (e.is_courier) continue;
      plan.candidates.push_back(Candidate{e.id, holding_time(e.weight, weights, config_), e.distance});
    }
    return plan;
  }

  const std::span<const NeighborEntry> table(holder.neighbor_table.data(), sensor_entry_count_[holder.id]);
  std::vector<NeighborEntry> eligible = baseline_eligible(holder.depth(), table, baseline_);
  if (protocol_ == ProtocolKind::Dbr) {
    for (const NeighborEntry& e : eligible) {
      plan.candidates.push_back(
          Candidate{e.id, dbr_forward_decision(holder.depth(), e.depth, baseline_).holding_time, e.distance});
    }
    std::stable_sort(plan.candidates.begin(), plan.candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.holding != b.holding) return a.holding < b.holding;
      return a.id < b.id;
    });
  } else {
    std::sort(eligible.begin(), eligible.end(), eedbr_before);
    for (const NeighborEntry& e : eligible) {
      plan.candidates.push_back(
          Candidate{e.id, eedbr_holding_time(e.residual_energy, eligible, baseline_), e.distance});
    }
  }
  return plan;
}

bool Simulation::forwarded(std::uint32_t slot, NodeId node) const {
  return forwarded_[static_cast<std::size_t>(slot) * nodes_.size() + node] != 0;
}

void Simulation::note_drop(std::uint32_t slot, DropReason reason) {
  if (!fates_[slot].drop) fates_[slot].drop = reason;
}

void Simulation::cancel_pending(NodeId node, std::uint32_t slot) {
  for (std::uint32_t idx : holdings_by_slot_[slot]) {
    Holding& h = holdings_[idx];
    if (h.active && h.node == node && suppress_on_overheard(packets_[h.slot], packets_[slot].packet_id)) {
      h.active = false;
    }
  }
}

void Simulation::arm(NodeId node, NodeId parent, std::uint32_t slot, std::uint32_t hops, double fire_time,
                     std::uint32_t rank) {
  const auto idx = static_cast<std::uint32_t>(holdings_.size());
  holdings_.push_back(Holding{node, parent, slot, hops, true});
  holdings_by_slot_[slot].push_back(idx);
  Event e;
  e.time = fire_time;
  e.kind = EventKind::HoldingTimerFire;
  e.rank = rank;
  e.subject = node;
  e.slot = slot;
  e.holding = idx;
  queue_.push(e);
}

void Simulation::transmit(NodeId holder, std::uint32_t slot, std::uint32_t hops, double time, NodeId cause) {
  SensorNode& node = nodes_[holder];
  DataPacket& packet = packets_[slot];
  if (node.residual_energy <= 0.0) {
    note_drop(slot, DropReason::StaleNeighbor);
    return;
  }
  if (hops + 1 > config_.node_count) {
    note_drop(slot, DropReason::HopBudget);
    return;
  }

  std::optional<Plan> early;
  if (config_.skip_unroutable && !nearest_sink_[holder]) {
    early = plan_for(node);
    if (!early->courier && early->candidates.empty()) {
      note_drop(slot, DropReason::NoForwarder);
      if (trace_on_ && hops > 0) {
        trace_.push_back(TxTrace{round_, time, holder, packet.packet_id, hops, TxTrace::Kind::Discard, cause});
      }
      return;
    }
  }

  const double payload = packet.payload_size;
  const double t_tx = transmission_time(payload, config_);
  round_tx_ += charge(holder, tx_energy(payload, config_));
  busy_[holder] += t_tx;
  forwarded_[static_cast<std::size_t>(slot) * nodes_.size() + holder] = 1;
  ++round_transmissions_;
  if (trace_on_) {
    trace_.push_back(TxTrace{round_, time, holder, packet.packet_id, hops,
                             hops == 0 ? TxTrace::Kind::Source : TxTrace::Kind::Relay, cause});
  }

  // Every live node in range hears the frame; any of them holding this
  // packet stands down.
  const double e_rx = rx_energy(payload, config_);
  for (NodeId x : physical_neighbors_[holder]) {
    if (nodes_[x].residual_energy <= 0.0) continue;
    round_rx_ += charge(x, e_rx);
    busy_[x] += t_tx;
    cancel_pending(x, slot);
  }

  if (const auto& sink = nearest_sink_[holder]) {
    if (packet_loss_draw(sink->second, channel_rng_, config_)) {
      note_drop(slot, DropReason::LossDraw);
      return;
    }
    Fate& fate = fates_[slot];
    if (!fate.delivered) {
      fate.delivered = true;
      packet.hop_count = hops + 1;
      packet.delivered_time = time + t_tx + propagation_delay(sink->second, config_);
    }
    return;
  }

  const Plan plan = early ? std::move(*early) : plan_for(node);
  if (!plan.courier && plan.candidates.empty()) {
    note_drop(slot, DropReason::NoForwarder);
    return;
  }

  bool collected = false;
  if (plan.courier) {
    const NeighborEntry& ce = *plan.courier;
    if (!packet_loss_draw(ce.distance, channel_rng_, config_)) {
      CourierNode& courier = couriers_[ce.id - config_.node_count];
      DataPacket copy = packet;
      copy.hop_count = hops + 1;
      courier_collect(courier, copy);
      fates_[slot].collected = true;
      collected = true;
      if (trace_on_) {
        trace_.push_back(TxTrace{round_, time, ce.id, packet.packet_id, hops + 1,
                                 TxTrace::Kind::CourierReceive, holder});
      }
    }
  }

  // Holding times count from the end of the widest propagation window, so
  // every candidate has heard the frame before the earliest timer expires.
  const double window = t_tx + propagation_delay(config_.tx_range, config_);
  bool armed = false;
  bool fresh = false;
  bool reachable = false;
  for (std::uint32_t rank = 0; rank < plan.candidates.size(); ++rank) {
    const Candidate& c = plan.candidates[rank];
    if (forwarded(slot, c.id)) continue;
    fresh = true;
    if (nodes_[c.id].residual_energy <= 0.0) continue;
    reachable = true;
    if (!packet_loss_draw(c.distance, channel_rng_, config_)) {
      arm(c.id, holder, slot, hops + 1, time + window + c.holding, rank);
      armed = true;
    }
    if (plan.unicast) break;
  }

  if (collected) {
    const CourierNode& courier = couriers_[plan.courier->id - config_.node_count];
    std::vector<PendingHolder> holders;
    for (std::uint32_t idx : holdings_by_slot_[slot]) {
      const Holding& h = holdings_[idx];
      if (h.active) holders.push_back(PendingHolder{h.node, nodes_[h.node].position, packet.packet_id, packet.source_id});
    }
    const auto cancelled = courier_ack_suppression(CourierAck{packet.packet_id, packet.source_id}, holders,
                                                   courier.position, config_);
    for (NodeId n : cancelled) cancel_pending(n, slot);
    if (trace_on_) {
      trace_.push_back(TxTrace{round_, time, courier.id, packet.packet_id, hops + 1, TxTrace::Kind::CourierAck, holder});
    }
    return;
  }

  if (!armed && fresh) {
    note_drop(slot, plan.candidates.empty() ? DropReason::NoForwarder
                    : reachable            ? DropReason::LossDraw
                                           : DropReason::StaleNeighbor);
  } else if (!armed && plan.candidates.empty()) {
    note_drop(slot, DropReason::NoForwarder);
  }
}

void Simulation::process(const Event& e) {
  switch (e.kind) {
    case EventKind::PacketArrival:
      transmit(e.subject, e.slot, 0, e.time, e.subject);
      break;
    case EventKind::HoldingTimerFire: {
      Holding& h = holdings_[e.holding];
      if (!h.active) break;
      h.active = false;
      if (forwarded(h.slot, h.node)) break;
      transmit(h.node, h.slot, h.hops, e.time, h.parent);
      break;
    }
    default:
      break;
  }
}

void Simulation::move_couriers(double now) {
  if (couriers_.empty()) return;
  for (CourierNode& c : couriers_) {
    advance_courier(c, tour_plan(c.index, state_.courier_phase, config_), kRoundSeconds);
  }

  const bool relay = config_.courier_relay && state_.courier_phase == CourierPhase::Sparse;
  const double wide = 2.0 * config_.tx_range;
  if (relay) {
    // Deep-band couriers (odd index) offload to a shallow-band courier.
    for (CourierNode& from : couriers_) {
      if (from.index % 2 == 0) continue;
      for (CourierNode& to : couriers_) {
        if (to.index % 2 == 1 || from.buffer.empty()) continue;
        courier_handoff(from, to, config_, wide, 2.0);
      }
    }
  }

  for (CourierNode& c : couriers_) {
    std::vector<DataPacket> out = courier_deliver(c, sinks_, config_, now, config_.tx_range, 1.0);
    if (out.empty() && relay) out = courier_deliver(c, sinks_, config_, now, wide, 2.0);
    for (const DataPacket& p : out) {
      if (awaiting_flush_.erase(p.packet_id) != 0) {
        ++cumulative_delivered_;
      }
    }
  }
}

RoundRecord Simulation::run_round() {
  ++round_;
  RoundRecord rec;
  rec.round = round_;
  const double t0 = static_cast<double>(round_ - 1) * kRoundSeconds;
  const std::size_t n = nodes_.size();

  std::vector<double> start_residual(n);
  for (NodeId i = 0; i < n; ++i) start_residual[i] = nodes_[i].residual_energy;
  busy_.assign(n, 0.0);
  round_tx_ = round_rx_ = 0.0;
  round_transmissions_ = 0;

  if (round_ == 1 && !is_hello_round(round_, config_.hello_interval_rounds)) hello_cycle(0);
  if (is_hello_round(round_, config_.hello_interval_rounds)) hello_cycle(round_);
  refresh_courier_entries();

  rec.active = alive_count();
  rec.regime = state_.regime;
  rec.depth_threshold = state_.depth_threshold;
  rec.courier_phase = state_.courier_phase;

  packets_.clear();
  fates_.clear();
  holdings_.clear();
  holdings_by_slot_.clear();
  queue_.clear();

  auto emit = [&](NodeId src) {
    if (!nodes_[src].alive) return;
    DataPacket p;
    p.packet_id = next_packet_id_++;
    p.source_id = src;
    p.payload_size = config_.packet_payload;
    p.created_round = round_;
    p.created_time = t0;
    const auto slot = static_cast<std::uint32_t>(packets_.size());
    packets_.push_back(p);
    Event e;
    e.time = t0;
    e.kind = EventKind::PacketArrival;
    e.subject = src;
    e.slot = slot;
    queue_.push(e);
  };
  if (sources_) {
    for (NodeId src : *sources_) emit(src);
  } else {
    for (NodeId i = 0; i < n; ++i) emit(i);
  }
  fates_.assign(packets_.size(), Fate{});
  holdings_by_slot_.assign(packets_.size(), {});
  forwarded_.assign(packets_.size() * n, 0);
  rec.generated = static_cast<std::uint32_t>(packets_.size());

  while (!queue_.empty()) process(queue_.pop());

  double latency_sum = 0.0;
  for (std::uint32_t slot = 0; slot < packets_.size(); ++slot) {
    const Fate& f = fates_[slot];
    if (f.delivered) {
      ++rec.delivered;
      latency_sum += *packets_[slot].delivered_time - packets_[slot].created_time;
    } else if (f.collected) {
      ++rec.collected;
      awaiting_flush_.insert(packets_[slot].packet_id);
    } else {
      ++rec.dropped;
      ++rec.drops_by_reason[static_cast<std::size_t>(f.drop.value_or(DropReason::NoForwarder))];
    }
  }
  rec.mean_latency = rec.delivered ? latency_sum / rec.delivered : 0.0;
  cumulative_delivered_ += rec.delivered;

  double idle = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    if (nodes_[i].residual_energy <= 0.0) continue;
    idle += charge(i, idle_energy(std::max(0.0, kRoundSeconds - busy_[i]), config_));
  }

  const std::uint64_t before_flush = cumulative_delivered_;
  move_couriers(t0 + kRoundSeconds);
  rec.courier_flushed = static_cast<std::uint32_t>(cumulative_delivered_ - before_flush);
  rec.buffered = static_cast<std::uint32_t>(awaiting_flush_.size());
  rec.cumulative_delivered = cumulative_delivered_;

  double consumed = 0.0;
  double sum = 0.0;
  for (SensorNode& node : nodes_) {
    consumed += start_residual[node.id] - node.residual_energy;
    node.alive = node.residual_energy > 0.0;
    if (node.alive) {
      ++rec.alive;
      sum += node.residual_energy;
    }
  }
  rec.dead = static_cast<std::uint32_t>(n) - rec.alive;
  if (rec.alive > 0) {
    const double mean = sum / rec.alive;
    double ss = 0.0;
    for (const SensorNode& node : nodes_) {
      if (node.alive) ss += (node.residual_energy - mean) * (node.residual_energy - mean);
    }
    rec.residual_stddev = std::sqrt(ss / rec.alive);
  }
  rec.energy_consumed = consumed;
  rec.energy_tx = round_tx_;
  rec.energy_rx = round_rx_;
  rec.energy_idle = idle;
  rec.transmissions = round_transmissions_;
  return rec;
}

std::vector<RoundRecord> run_simulation(const NetworkConfig& config, ProtocolKind protocol, std::uint64_t seed) {
  Simulation sim(config, protocol, seed);
  std::vector<RoundRecord> records;
  records.reserve(config.rounds_max);
  for (std::uint32_t r = 0; r < config.rounds_max; ++r) {
    if (sim.alive_count() == 0) break;
    records.push_back(sim.run_round());
  }
  return records;
}

}  // namespace uwsn
