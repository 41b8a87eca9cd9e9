#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uwsn/config.hpp"
#include "uwsn/types.hpp"

namespace uwsn {

// Which weight formula is active. Eq1 favours energy-rich nodes close to the
// sea bed, Eq2 shifts priority onto depth, Eq3 back onto residual energy.
enum class Regime { Eq1, Eq2, Eq3 };

// Network-wide adaptive state, driven by the sink's dead-node count.
struct ProtocolState {
  Regime regime = Regime::Eq1;
  double depth_threshold = 60.0;
  std::uint32_t dead_count = 0;
  std::uint32_t total_nodes = 0;
  CourierPhase courier_phase = CourierPhase::Initial;
  std::array<double, 3> threshold_schedule{60.0, 40.0, 20.0};

  friend bool operator==(const ProtocolState&, const ProtocolState&) = default;
};

// Dead-count trigger points for a network of `total_nodes`.
struct Triggers {
  std::uint32_t weight_eq2;       // ceil(2% of N): Eq2 and the middle threshold
  std::uint32_t courier_sparse;   // ceil(75% of N)
  std::uint32_t weight_eq3;       // ceil(80% of N)
  std::uint32_t threshold_final;  // the last threshold applies once dead_count exceeds this

  static Triggers for_network(std::uint32_t total_nodes);
};

ProtocolState initial_state(std::uint32_t total_nodes, const NetworkConfig& config);

// Pure in dead_count: equal inputs give equal states.
ProtocolState update_state(std::uint32_t dead_count, const ProtocolState& state);

// Clamped denominators keep the result finite near the surface, the sea bed,
// and for nearly drained nodes.
double weight(double residual_energy, double depth, Regime regime, const NetworkConfig& config);
double weight(const SensorNode& node, const ProtocolState& state, const NetworkConfig& config);

// Neighbours at least depth_threshold shallower than the source, plus every
// courier currently in range. Couriers first (nearest first), then by
// descending weight, residual energy, ascending id.
std::vector<NeighborEntry> eligible_neighbors(const SensorNode& source, const ProtocolState& state);

// Strict priority order used both for sorting and for the argmax.
bool forwards_before(const NeighborEntry& a, const NeighborEntry& b);

std::optional<NodeId> select_forwarder(std::span<const NeighborEntry> candidates,
                                       const ProtocolState& state);

// Normalised linear holding time: 0 for the heaviest candidate, t_max for
// the lightest.
double holding_time(double own_weight, std::span<const double> candidate_weights,
                    const NetworkConfig& config);

bool suppress_on_overheard(const DataPacket& pending, PacketId overheard_packet_id);

struct CourierAck {
  PacketId packet_id = 0;
  NodeId source_id = 0;
};

struct PendingHolder {
  NodeId node = 0;
  Vec3 position;
  PacketId packet_id = 0;
  NodeId source_id = 0;
};

// Holders within the courier's range whose pending packet matches the ACK.
std::vector<NodeId> courier_ack_suppression(const CourierAck& ack, std::span<const PendingHolder> holders,
                                            const Vec3& courier_position, const NetworkConfig& config);

}  // namespace uwsn
