#include "uwsn/channel.hpp"

#include <algorithm>

namespace uwsn {

double loss_probability(double distance_m, const NetworkConfig& config) {
  const double ratio = std::clamp(distance_m / config.tx_range, 0.0, 1.0);
  return config.loss_base * ratio;
}

LinkSample sample_link(double distance_m, const NetworkConfig& config) {
  return LinkSample{distance_m, propagation_delay(distance_m, config),
                    loss_probability(distance_m, config)};
}

bool packet_loss_draw(double distance_m, Rng& rng, const NetworkConfig& config) {
  return rng.uniform() < loss_probability(distance_m, config);
}

}  // namespace uwsn
