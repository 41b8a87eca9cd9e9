#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace uwsn {

// Sensors use ids [0, node_count); couriers follow at [node_count, node_count + courier_count).
using NodeId = std::uint32_t;
using PacketId = std::uint64_t;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;  // metres below the surface

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.depth - b.depth);
}

struct NeighborEntry {
  NodeId id = 0;
  double depth = 0.0;
  double weight = 0.0;
  double residual_energy = 0.0;  // as advertised in the last hello
  double distance = 0.0;
  std::uint32_t last_heard_round = 0;
  bool is_courier = false;
};

struct SensorNode {
  NodeId id = 0;
  Vec3 position;
  double residual_energy = 0.0;
  double weight = 0.0;
  bool alive = true;
  std::vector<NeighborEntry> neighbor_table;
  std::vector<NodeId> threshold_queue;

  double depth() const { return position.depth; }
};

struct DataPacket {
  PacketId packet_id = 0;
  NodeId source_id = 0;
  std::uint32_t payload_size = 0;
  std::uint32_t created_round = 0;
  double created_time = 0.0;
  std::uint32_t hop_count = 0;
  std::optional<double> delivered_time;
};

enum class Heading { Up, Down };
enum class CourierPhase { Initial, Sparse };

struct CourierNode {
  NodeId id = 0;
  std::uint32_t index = 1;  // 1-based ordinal
  Vec3 position;
  double speed = 0.0;
  double band_top = 0.0;
  double band_bottom = 0.0;
  Heading heading = Heading::Up;
  std::vector<DataPacket> buffer;
  double energy_ledger = 0.0;  // J spent on sink deliveries; never drawn from a battery
};

struct Sink {
  std::uint32_t id = 0;
  Vec3 position;
};

}  // namespace uwsn
