#include "uwsn/topology.hpp"

#include "uwsn/rng.hpp"

namespace uwsn {

Topology generate_topology(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  Topology topo;
  Rng rng(seed);

  topo.nodes.reserve(config.node_count);
  for (NodeId i = 0; i < config.node_count; ++i) {
    SensorNode node;
    node.id = i;
    node.position.x = rng.uniform() * config.region_x;
    node.position.y = rng.uniform() * config.region_y;
    node.position.depth = rng.uniform() * config.water_depth;
    node.residual_energy = initial_node_energy(config);
    node.alive = node.residual_energy > 0.0;
    topo.nodes.push_back(std::move(node));
  }

  for (std::uint32_t k = 0; k < config.sink_count; ++k) {
    topo.sinks.push_back(Sink{k, Vec3{config.sink_spacing / 2.0 + k * config.sink_spacing,
                                      config.region_y / 2.0, 0.0}});
  }

  const double spacing = config.region_x / static_cast<double>(config.courier_count ? config.courier_count : 1);
  for (std::uint32_t k = 0; k < config.courier_count; ++k) {
    CourierNode courier;
    courier.id = config.node_count + k;
    courier.index = k + 1;
    courier.position = Vec3{spacing / 2.0 + k * spacing, config.region_y / 2.0, config.water_depth};
    courier.speed = config.courier_speed;
    courier.band_top = 0.0;
    courier.band_bottom = config.water_depth;
    courier.heading = Heading::Up;
    topo.couriers.push_back(std::move(courier));
  }
  return topo;
}

}  // namespace uwsn
