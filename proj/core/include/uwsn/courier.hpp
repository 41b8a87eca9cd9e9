#pragma once

#include <span>
#include <utility>
#include <vector>

#include "uwsn/config.hpp"
#include "uwsn/types.hpp"

namespace uwsn {

struct TourPlan {
  std::uint32_t courier_index = 1;
  double band_top = 0.0;
  double band_bottom = 0.0;
  double speed = 0.0;
};

// Initial phase: full-column tours at the base speed. Sparse phase: odd
// couriers sweep 355 m to the bed, even couriers 100-200 m, both faster.
// Bands are rescaled proportionally when the water is shallower than 355 m.
TourPlan tour_plan(std::uint32_t courier_index, CourierPhase phase, const NetworkConfig& config);

struct CourierPose {
  double depth = 0.0;
  Heading heading = Heading::Up;
};

// Triangle-wave motion inside the band, reflecting at both ends.
// Throws std::invalid_argument if start_depth lies outside the band.
CourierPose position_at(const TourPlan& plan, double start_depth, Heading start_heading, double elapsed);

// Moves the courier by `dt` seconds under `plan`. A courier outside the band
// (after a phase switch) travels straight toward it and clamps on arrival.
void advance_courier(CourierNode& courier, const TourPlan& plan, double dt);

// Appends once per packet_id. Returns false for a duplicate.
bool courier_collect(CourierNode& courier, const DataPacket& packet);

// Flushes the whole buffer to the nearest sink within `link_range`; the
// aggregated transmission is charged to the courier's ledger scaled by
// `power_factor`. Returns the delivered packets (empty when no sink is
// reachable or the buffer is empty).
std::vector<DataPacket> courier_deliver(CourierNode& courier, std::span<const Sink> sinks,
                                        const NetworkConfig& config, double now, double link_range,
                                        double power_factor = 1.0);

inline std::vector<DataPacket> courier_deliver(CourierNode& courier, std::span<const Sink> sinks,
                                               const NetworkConfig& config, double now) {
  return courier_deliver(courier, sinks, config, now, config.tx_range);
}

// Moves `from`'s buffer into `to` when they are within `link_range`.
// Returns the number of packets newly added to `to`.
std::size_t courier_handoff(CourierNode& from, CourierNode& to, const NetworkConfig& config,
                            double link_range, double power_factor);

}  // namespace uwsn
