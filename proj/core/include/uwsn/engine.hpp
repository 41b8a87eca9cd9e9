#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <unordered_set>
#include <vector>

#include "uwsn/amctd.hpp"
#include "uwsn/baselines.hpp"
#include "uwsn/config.hpp"
#include "uwsn/courier.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/topology.hpp"

namespace uwsn {

// Declaration order is the tie-break order for events at equal times.
enum class EventKind : std::uint8_t { PacketArrival, HoldingTimerFire, HelloBroadcast, CourierWaypoint, RoundBoundary };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::PacketArrival;
  std::uint32_t rank = 0;  // candidate rank for timers, 0 otherwise
  NodeId subject = 0;
  std::uint64_t seq = 0;
  std::uint32_t slot = 0;     // packet slot within the round
  std::uint32_t holding = 0;  // index into the round's holdings
};

// Strict weak order: time, kind, rank, subject, insertion sequence.
bool event_before(const Event& a, const Event& b);

class EventQueue {
 public:
  void push(Event e);
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  void clear();

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const { return event_before(b, a); }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

enum class DropReason : std::uint8_t { NoForwarder, LossDraw, HopBudget, StaleNeighbor };
inline constexpr std::size_t kDropReasonCount = 4;

struct RoundRecord {
  std::uint32_t round = 0;
  std::uint32_t active = 0;  // alive at the start of the round
  std::uint32_t alive = 0;   // alive at the end of the round
  std::uint32_t dead = 0;
  std::uint32_t generated = 0;
  std::uint32_t delivered = 0;        // this round's packets that reached a sink directly
  std::uint32_t collected = 0;        // this round's packets handed to a courier
  std::uint32_t dropped = 0;
  std::uint32_t courier_flushed = 0;  // buffered packets a courier passed to a sink this round
  std::uint32_t buffered = 0;         // packets held by couriers at the end of the round
  std::array<std::uint32_t, kDropReasonCount> drops_by_reason{};
  std::uint32_t transmissions = 0;
  double energy_consumed = 0.0;
  double energy_tx = 0.0;
  double energy_rx = 0.0;
  double energy_idle = 0.0;
  std::uint64_t cumulative_delivered = 0;  // sink arrivals, direct or via courier
  double residual_stddev = 0.0;            // across nodes alive at the end of the round
  double mean_latency = 0.0;               // over this round's direct sink deliveries
  Regime regime = Regime::Eq1;
  double depth_threshold = 0.0;
  CourierPhase courier_phase = CourierPhase::Initial;
};

struct TxTrace {
  // Discard: a relay took the packet but knew of no next hop, so it stayed silent.
  enum class Kind : std::uint8_t { Source, Relay, CourierReceive, CourierAck, Discard };
  std::uint32_t round = 0;
  double time = 0.0;
  NodeId node = 0;  // transmitter, or the courier for CourierReceive/CourierAck
  PacketId packet_id = 0;
  std::uint32_t hops = 0;
  Kind kind = Kind::Source;
  NodeId cause = 0;  // node whose transmission delivered the packet to `node`
};

// One deterministic run: a world, a protocol and a random stream.
class Simulation {
 public:
  Simulation(NetworkConfig config, ProtocolKind protocol, std::uint64_t seed);
  Simulation(NetworkConfig config, ProtocolKind protocol, Topology topology, std::uint64_t seed);

  // Advances one round. Every alive node (or each listed source, if
  // restricted) emits one packet; relay chains complete inside the round.
  RoundRecord run_round();

  // Neighbour discovery and the sink's dead-node snapshot. Called by
  // run_round on hello rounds; exposed for tests.
  void hello_cycle(std::uint32_t round);

  static bool is_hello_round(std::uint32_t round, std::uint32_t interval);

  void restrict_sources(std::optional<std::vector<NodeId>> sources) { sources_ = std::move(sources); }
  void enable_trace(bool on) { trace_on_ = on; }
  const std::vector<TxTrace>& trace() const { return trace_; }
  void clear_trace() { trace_.clear(); }

  const NetworkConfig& config() const { return config_; }
  ProtocolKind protocol() const { return protocol_; }
  const ProtocolState& state() const { return state_; }
  const std::vector<SensorNode>& nodes() const { return nodes_; }
  std::vector<SensorNode>& mutable_nodes() { return nodes_; }
  const std::vector<CourierNode>& couriers() const { return couriers_; }
  const std::vector<Sink>& sinks() const { return sinks_; }
  std::uint32_t round() const { return round_; }
  std::uint32_t alive_count() const;
  std::size_t awaiting_flush() const { return awaiting_flush_.size(); }
  double courier_energy() const;
  double initial_energy_total() const { return initial_total_; }
  double residual_energy_total() const;

 private:
  struct Holding {
    NodeId node = 0;
    NodeId parent = 0;
    std::uint32_t slot = 0;
    std::uint32_t hops = 0;
    bool active = false;
  };
  struct Fate {
    bool delivered = false;
    bool collected = false;
    std::optional<DropReason> drop;
  };
  struct Candidate {
    NodeId id = 0;
    double holding = 0.0;
    double distance = 0.0;
  };
  struct Plan {
    std::optional<NeighborEntry> courier;
    std::vector<Candidate> candidates;  // priority order
    bool unicast = false;               // only the first candidate is addressed
  };

  void build_static_links();
  void refresh_courier_entries();
  Plan plan_for(const SensorNode& holder) const;
  void transmit(NodeId holder, std::uint32_t slot, std::uint32_t hops, double time, NodeId cause);
  void process(const Event& e);
  void cancel_pending(NodeId node, std::uint32_t slot);
  void arm(NodeId node, NodeId parent, std::uint32_t slot, std::uint32_t hops, double fire_time, std::uint32_t rank);
  double charge(NodeId node, double joules);
  void note_drop(std::uint32_t slot, DropReason reason);
  void move_couriers(double now);
  bool forwarded(std::uint32_t slot, NodeId node) const;

  NetworkConfig config_;
  ProtocolKind protocol_;
  BaselinePolicy baseline_;
  ProtocolState state_;
  Rng channel_rng_;

  std::vector<SensorNode> nodes_;
  std::vector<Sink> sinks_;
  std::vector<CourierNode> couriers_;
  std::vector<std::vector<NodeId>> physical_neighbors_;
  std::vector<std::optional<std::pair<std::uint32_t, double>>> nearest_sink_;
  std::vector<std::size_t> sensor_entry_count_;

  std::uint32_t round_ = 0;
  PacketId next_packet_id_ = 0;
  std::uint64_t cumulative_delivered_ = 0;
  double initial_total_ = 0.0;
  std::unordered_set<PacketId> awaiting_flush_;
  std::optional<std::vector<NodeId>> sources_;

  // Per-round scratch.
  EventQueue queue_;
  std::vector<DataPacket> packets_;
  std::vector<Fate> fates_;
  std::vector<Holding> holdings_;
  std::vector<std::vector<std::uint32_t>> holdings_by_slot_;
  std::vector<std::uint8_t> forwarded_;
  std::vector<double> busy_;
  double round_tx_ = 0.0;
  double round_rx_ = 0.0;
  std::uint32_t round_transmissions_ = 0;

  bool trace_on_ = false;
  std::vector<TxTrace> trace_;
};

// Runs until rounds_max or until every node is dead.
std::vector<RoundRecord> run_simulation(const NetworkConfig& config, ProtocolKind protocol, std::uint64_t seed);

}  // namespace uwsn
