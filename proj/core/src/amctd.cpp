#include "uwsn/amctd.hpp"

#include <algorithm>
#include <cmath>

#include "uwsn/channel.hpp"

namespace uwsn {

namespace {

constexpr double kClampFraction = 1e-6;

std::uint32_t ceil_percent(std::uint32_t percent, std::uint32_t n) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(percent) * n + 99) / 100);
}

}  // namespace

Triggers Triggers::for_network(std::uint32_t total_nodes) {
  return Triggers{ceil_percent(2, total_nodes), ceil_percent(75, total_nodes),
                  ceil_percent(80, total_nodes), 200};
}

ProtocolState initial_state(std::uint32_t total_nodes, const NetworkConfig& config) {
  ProtocolState state;
  state.total_nodes = total_nodes;
  std::copy_n(config.depth_threshold_schedule.begin(), 3, state.threshold_schedule.begin());
  return update_state(0, state);
}

ProtocolState update_state(std::uint32_t dead_count, const ProtocolState& state) {
  const Triggers t = Triggers::for_network(state.total_nodes);
  ProtocolState next = state;
  next.dead_count = dead_count;

  if (dead_count < t.weight_eq2) {
    next.regime = Regime::Eq1;
  } else if (dead_count < t.weight_eq3) {
    next.regime = Regime::Eq2;
  } else {
    next.regime = Regime::Eq3;
  }

  if (dead_count < t.weight_eq2) {
    next.depth_threshold = state.threshold_schedule[0];
  } else if (dead_count <= t.threshold_final) {
    next.depth_threshold = state.threshold_schedule[1];
  } else {
    next.depth_threshold = state.threshold_schedule[2];
  }

  next.courier_phase = dead_count >= t.courier_sparse ? CourierPhase::Sparse : CourierPhase::Initial;
  return next;
}

double weight(double residual_energy, double depth, Regime regime, const NetworkConfig& config) {
  const double p = config.priority_value;
  const double energy_floor = kClampFraction * std::max(config.initial_energy, 1.0);
  const double depth_floor = kClampFraction * config.water_depth;
  switch (regime) {
    case Regime::Eq1:
      return p * residual_energy / std::max(config.water_depth - depth, depth_floor);
    case Regime::Eq2:
      if (config.eq2_as_printed) return p * depth / std::max(residual_energy, energy_floor);
      return p * (config.water_depth - depth) / std::max(residual_energy, energy_floor);
    case Regime::Eq3:
      return residual_energy / (p * std::max(depth, depth_floor));
  }
  return 0.0;
}

double weight(const SensorNode& node, const ProtocolState& state, const NetworkConfig& config) {
  return weight(node.residual_energy, node.depth(), state.regime, config);
}

bool forwards_before(const NeighborEntry& a, const NeighborEntry& b) {
  if (a.is_courier != b.is_courier) return a.is_courier;
  if (a.is_courier) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  }
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.residual_energy != b.residual_energy) return a.residual_energy > b.residual_energy;
  return a.id < b.id;
}

std::vector<NeighborEntry> eligible_neighbors(const SensorNode& source, const ProtocolState& state) {
  std::vector<NeighborEntry> out;
  for (const NeighborEntry& e : source.neighbor_table) {
    if (e.is_courier || source.depth() - e.depth >= state.depth_threshold) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), forwards_before);
  return out;
}

std::optional<NodeId> select_forwarder(std::span<const NeighborEntry> candidates, const ProtocolState&) {
  if (candidates.empty()) return std::nullopt;
  return std::min_element(candidates.begin(), candidates.end(), forwards_before)->id;
}

double holding_time(double own_weight, std::span<const double> candidate_weights,
                    const NetworkConfig& config) {
  if (candidate_weights.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(candidate_weights.begin(), candidate_weights.end());
  if (!(*hi > *lo)) return 0.0;
  const double span = *hi - *lo;
  return config.t_max_holding * std::clamp((*hi - own_weight) / span, 0.0, 1.0);
}

bool suppress_on_overheard(const DataPacket& pending, PacketId overheard_packet_id) {
  return pending.packet_id == overheard_packet_id;
}

std::vector<NodeId> courier_ack_suppression(const CourierAck& ack, std::span<const PendingHolder> holders,
                                            const Vec3& courier_position, const NetworkConfig& config) {
  std::vector<NodeId> cancelled;
  for (const PendingHolder& h : holders) {
    if (h.packet_id == ack.packet_id && h.source_id == ack.source_id &&
        in_range(h.position, courier_position, config)) {
      cancelled.push_back(h.node);
    }
  }
  return cancelled;
}

}  // namespace uwsn
