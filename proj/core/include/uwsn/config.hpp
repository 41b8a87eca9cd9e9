#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace uwsn {

enum class ProtocolKind { Amctd, Dbr, Eedbr };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view name);

// Scenario parameters. Defaults reproduce the 225-node reference deployment.
struct NetworkConfig {
  double region_x = 500.0;       // m
  double region_y = 500.0;       // m
  double water_depth = 500.0;    // m
  std::uint32_t node_count = 225;
  double initial_energy = 70.0;  // J
  std::uint32_t packet_payload = 50;  // bytes
  double tx_range = 100.0;       // m
  std::uint32_t courier_count = 4;
  double sink_spacing = 100.0;   // m
  std::uint32_t sink_count = 5;
  double priority_value = 1.0;
  double tx_power = 2.0;         // W
  double rx_power = 0.1;         // W
  double idle_power = 0.01;      // W
  double bitrate = 10000.0;      // bit/s
  double sound_speed = 1500.0;   // m/s
  std::uint32_t rounds_max = 15000;
  std::uint32_t hello_interval_rounds = 50;
  double aggregation_factor = 0.6;
  std::uint32_t run_count = 3;
  std::uint64_t rng_seed = 42;

  // Channel
  double loss_base = 0.1;
  std::uint32_t hello_payload = 8;  // bytes

  // Routing
  double t_max_holding = 0.5;  // s
  std::vector<double> depth_threshold_schedule{60.0, 40.0, 20.0};
  bool eq2_as_printed = true;
  double baseline_depth_threshold = 60.0;
  // A holder that knows of no sink, courier or eligible neighbor drops the
  // packet without transmitting.
  bool skip_unroutable = true;

  // Couriers
  double courier_speed = 3.0;  // m/s
  double courier_sparse_speed_multiplier = 2.0;
  bool courier_relay = true;

  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  // Assigns one field from its textual form. Throws std::invalid_argument on
  // unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);

  // Field names accepted by set(), in declaration order.
  static const std::vector<std::string>& keys();

  // Round-trips through set(): every key = value pair, one per line.
  std::string to_text() const;
};

// Parses the flat `key = value` format. Blank lines and lines starting with
// '#' are skipped. Errors carry the line number.
NetworkConfig parse_config(std::string_view text, NetworkConfig base = {});
NetworkConfig load_config(const std::filesystem::path& path, NetworkConfig base = {});

}  // namespace uwsn
