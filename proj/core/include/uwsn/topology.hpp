#pragma once

#include <cstdint>
#include <vector>

#include "uwsn/config.hpp"
#include "uwsn/types.hpp"

namespace uwsn {

struct Topology {
  std::vector<SensorNode> nodes;
  std::vector<Sink> sinks;
  std::vector<CourierNode> couriers;
};

// Uniform random placement in the water column. A pure function of
// (config, seed); sinks and couriers are placed deterministically.
Topology generate_topology(const NetworkConfig& config, std::uint64_t seed);

inline double initial_node_energy(const NetworkConfig& config) { return config.initial_energy; }

}  // namespace uwsn
