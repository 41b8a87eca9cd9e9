#include "uwsn/courier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uwsn/channel.hpp"

namespace uwsn {

namespace {

constexpr double kReferenceDepth = 500.0;
constexpr double kDeepBandTop = 355.0;
constexpr double kShallowBandTop = 100.0;
constexpr double kShallowBandBottom = 200.0;

}  // namespace

TourPlan tour_plan(std::uint32_t courier_index, CourierPhase phase, const NetworkConfig& config) {
  if (courier_index < 1 || courier_index > std::max<std::uint32_t>(config.courier_count, 1)) {
    throw std::invalid_argument("courier index out of range");
  }
  TourPlan plan;
  plan.courier_index = courier_index;
  const double depth = config.water_depth;
  if (phase == CourierPhase::Initial) {
    plan.band_top = 0.0;
    plan.band_bottom = depth;
    plan.speed = config.courier_speed;
    return plan;
  }
  const double scale = depth > kDeepBandTop ? 1.0 : depth / kReferenceDepth;
  if (courier_index % 2 == 1) {
    plan.band_top = kDeepBandTop * scale;
    plan.band_bottom = depth;
  } else {
    plan.band_top = kShallowBandTop * scale;
    plan.band_bottom = std::min(kShallowBandBottom * scale, depth);
  }
  plan.speed = config.courier_speed * config.courier_sparse_speed_multiplier;
  return plan;
}

CourierPose position_at(const TourPlan& plan, double start_depth, Heading start_heading, double elapsed) {
  if (start_depth < plan.band_top || start_depth > plan.band_bottom) {
    throw std::invalid_argument("courier start depth outside its band");
  }
  const double length = plan.band_bottom - plan.band_top;
  if (elapsed <= 0.0 || plan.speed <= 0.0 || length <= 0.0) return {start_depth, start_heading};

  // Unfold the band into a cycle of length 2L: [0, L) descending, [L, 2L) ascending.
  const double cycle = 2.0 * length;
  const double offset = start_depth - plan.band_top;
  const double s0 = start_heading == Heading::Down ? offset : cycle - offset;
  const double s = std::fmod(s0 + plan.speed * elapsed, cycle);
  if (s < length) return {plan.band_top + s, Heading::Down};
  return {plan.band_top + (cycle - s), Heading::Up};
}

void advance_courier(CourierNode& courier, const TourPlan& plan, double dt) {
  courier.band_top = plan.band_top;
  courier.band_bottom = plan.band_bottom;
  courier.speed = plan.speed;
  double depth = courier.position.depth;
  double remaining = dt;

  if (depth < plan.band_top || depth > plan.band_bottom) {
    const bool below = depth > plan.band_bottom;
    const double target = below ? plan.band_bottom : plan.band_top;
    const double gap = std::abs(depth - target);
    const double travel = plan.speed * remaining;
    if (travel < gap) {
      courier.position.depth = below ? depth - travel : depth + travel;
      courier.heading = below ? Heading::Up : Heading::Down;
      return;
    }
    remaining -= plan.speed > 0.0 ? gap / plan.speed : remaining;
    depth = target;
    courier.heading = below ? Heading::Up : Heading::Down;
  }
  const CourierPose pose = position_at(plan, depth, courier.heading, remaining);
  courier.position.depth = pose.depth;
  courier.heading = pose.heading;
}

bool courier_collect(CourierNode& courier, const DataPacket& packet) {
  const bool dup = std::any_of(courier.buffer.begin(), courier.buffer.end(),
                               [&](const DataPacket& p) { return p.packet_id == packet.packet_id; });
  if (dup) return false;
  courier.buffer.push_back(packet);
  return true;
}

std::vector<DataPacket> courier_deliver(CourierNode& courier, std::span<const Sink> sinks,
                                        const NetworkConfig& config, double now, double link_range,
                                        double power_factor) {
  if (courier.buffer.empty()) return {};
  const bool reachable = std::any_of(sinks.begin(), sinks.end(), [&](const Sink& s) {
    return distance(s.position, courier.position) <= link_range;
  });
  if (!reachable) return {};

  std::vector<DataPacket> delivered = std::move(courier.buffer);
  courier.buffer.clear();
  double bytes = 0.0;
  for (DataPacket& p : delivered) {
    p.delivered_time = now;
    bytes += p.payload_size;
  }
  courier.energy_ledger += config.aggregation_factor * power_factor * tx_energy(bytes, config);
  return delivered;
}

std::size_t courier_handoff(CourierNode& from, CourierNode& to, const NetworkConfig& config,
                            double link_range, double power_factor) {
  if (from.buffer.empty() || distance(from.position, to.position) > link_range) return 0;
  double bytes = 0.0;
  std::size_t added = 0;
  for (const DataPacket& p : from.buffer) {
    bytes += p.payload_size;
    if (courier_collect(to, p)) ++added;
  }
  from.energy_ledger += config.aggregation_factor * power_factor * tx_energy(bytes, config);
  from.buffer.clear();
  return added;
}

}  // namespace uwsn
