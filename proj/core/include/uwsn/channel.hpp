#pragma once

#include "uwsn/config.hpp"
#include "uwsn/rng.hpp"
#include "uwsn/types.hpp"

namespace uwsn {

// Idealised acoustic link: range cut-off, sound-speed delay, and a Bernoulli
// loss whose probability grows linearly with distance.
struct LinkSample {
  double distance = 0.0;
  double propagation_delay = 0.0;
  double loss_probability = 0.0;
};

inline bool in_range(const Vec3& a, const Vec3& b, const NetworkConfig& config) {
  return distance(a, b) <= config.tx_range;
}

inline double propagation_delay(double distance_m, const NetworkConfig& config) {
  return distance_m / config.sound_speed;
}

inline double transmission_time(double payload_bytes, const NetworkConfig& config) {
  return payload_bytes * 8.0 / config.bitrate;
}

inline double tx_energy(double payload_bytes, const NetworkConfig& config) {
  return config.tx_power * transmission_time(payload_bytes, config);
}

inline double rx_energy(double payload_bytes, const NetworkConfig& config) {
  return config.rx_power * transmission_time(payload_bytes, config);
}

inline double idle_energy(double duration_s, const NetworkConfig& config) {
  return config.idle_power * duration_s;
}

double loss_probability(double distance_m, const NetworkConfig& config);

LinkSample sample_link(double distance_m, const NetworkConfig& config);

// Consumes exactly one draw from rng. Returns true when the packet is lost.
bool packet_loss_draw(double distance_m, Rng& rng, const NetworkConfig& config);

}  // namespace uwsn
