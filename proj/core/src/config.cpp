#include "uwsn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace uwsn {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Amctd: return "amctd";
    case ProtocolKind::Dbr: return "dbr";
    case ProtocolKind::Eedbr: return "eedbr";
  }
  return "unknown";
}

ProtocolKind parse_protocol(std::string_view name) {
  if (name == "amctd") return ProtocolKind::Amctd;
  if (name == "dbr") return ProtocolKind::Dbr;
  if (name == "eedbr") return ProtocolKind::Eedbr;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("invalid value '" + std::string(value) + "' for key '" +
                              std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  // std::from_chars for double is available in libstdc++ 11.
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) bad_value(key, value);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  bad_value(key, value);
}

std::vector<double> parse_schedule(std::string_view key, std::string_view value) {
  std::vector<double> out;
  if (!value.empty() && value.front() == '"' && value.back() == '"' && value.size() >= 2) {
    value = value.substr(1, value.size() - 2);
  }
  while (!value.empty()) {
    const auto comma = value.find(',');
    out.push_back(parse_double(key, trim(value.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  if (out.size() != 3) bad_value(key, value);
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Field {
  std::function<void(NetworkConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const NetworkConfig&)> get;
};

#define UWSN_DOUBLE(name)                                                                   \
  {                                                                                         \
    #name, Field {                                                                          \
      [](NetworkConfig& c, std::string_view k, std::string_view v) { c.name = parse_double(k, v); }, \
          [](const NetworkConfig& c) { return fmt_double(c.name); }                         \
    }                                                                                       \
  }
#define UWSN_UINT(name, type)                                                               \
  {                                                                                         \
    #name, Field {                                                                          \
      [](NetworkConfig& c, std::string_view k, std::string_view v) { c.name = parse_int<type>(k, v); }, \
          [](const NetworkConfig& c) { return std::to_string(c.name); }                     \
    }                                                                                       \
  }
#define UWSN_BOOL(name)                                                                     \
  {                                                                                         \
    #name, Field {                                                                          \
      [](NetworkConfig& c, std::string_view k, std::string_view v) { c.name = parse_bool(k, v); }, \
          [](const NetworkConfig& c) { return std::string(c.name ? "true" : "false"); }     \
    }                                                                                       \
  }

const std::vector<std::pair<std::string, Field>>& field_table() {
  static const std::vector<std::pair<std::string, Field>> table = {
      UWSN_DOUBLE(region_x),
      UWSN_DOUBLE(region_y),
      UWSN_DOUBLE(water_depth),
      UWSN_UINT(node_count, std::uint32_t),
      UWSN_DOUBLE(initial_energy),
      UWSN_UINT(packet_payload, std::uint32_t),
      UWSN_DOUBLE(tx_range),
      UWSN_UINT(courier_count, std::uint32_t),
      UWSN_DOUBLE(sink_spacing),
      UWSN_UINT(sink_count, std::uint32_t),
      UWSN_DOUBLE(priority_value),
      UWSN_DOUBLE(tx_power),
      UWSN_DOUBLE(rx_power),
      UWSN_DOUBLE(idle_power),
      UWSN_DOUBLE(bitrate),
      UWSN_DOUBLE(sound_speed),
      UWSN_UINT(rounds_max, std::uint32_t),
      UWSN_UINT(hello_interval_rounds, std::uint32_t),
      UWSN_DOUBLE(aggregation_factor),
      UWSN_UINT(run_count, std::uint32_t),
      UWSN_UINT(rng_seed, std::uint64_t),
      UWSN_DOUBLE(loss_base),
      UWSN_UINT(hello_payload, std::uint32_t),
      UWSN_DOUBLE(t_max_holding),
      {"depth_threshold_schedule",
       Field{[](NetworkConfig& c, std::string_view k, std::string_view v) {
               c.depth_threshold_schedule = parse_schedule(k, v);
             },
             [](const NetworkConfig& c) {
               std::string out;
               for (std::size_t i = 0; i < c.depth_threshold_schedule.size(); ++i) {
                 if (i) out += ',';
                 out += fmt_double(c.depth_threshold_schedule[i]);
               }
               return out;
             }}},
      UWSN_BOOL(eq2_as_printed),
      UWSN_DOUBLE(baseline_depth_threshold),
      UWSN_DOUBLE(courier_speed),
      UWSN_DOUBLE(courier_sparse_speed_multiplier),
      UWSN_BOOL(courier_relay),
      UWSN_BOOL(skip_unroutable),
  };
  return table;
}

#undef UWSN_DOUBLE
#undef UWSN_UINT
#undef UWSN_BOOL

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : field_table()) {
    if (name == key) return &field;
  }
  return nullptr;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid config: ") + what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(region_x > 0 && region_y > 0, "region dimensions must be positive");
  require(water_depth > 0, "water_depth must be positive");
  require(tx_range > 0, "tx_range must be positive");
  require(bitrate > 0, "bitrate must be positive");
  require(sound_speed > 0, "sound_speed must be positive");
  require(aggregation_factor > 0 && aggregation_factor <= 1, "aggregation_factor must be in (0,1]");
  require(node_count >= 1, "node_count must be at least 1");
  require(sink_count >= 1, "sink_count must be at least 1");
  require(priority_value > 0, "priority_value must be positive");
  require(initial_energy >= 0, "initial_energy must be non-negative");
  require(tx_power >= 0 && rx_power >= 0 && idle_power >= 0, "powers must be non-negative");
  require(loss_base >= 0 && loss_base <= 1, "loss_base must be in [0,1]");
  require(t_max_holding >= 0, "t_max_holding must be non-negative");
  require(hello_interval_rounds >= 1, "hello_interval_rounds must be at least 1");
  require(depth_threshold_schedule.size() == 3, "depth_threshold_schedule needs three values");
  for (double t : depth_threshold_schedule) require(t > 0, "depth thresholds must be positive");
  require(baseline_depth_threshold > 0, "baseline_depth_threshold must be positive");
  require(courier_speed >= 0, "courier_speed must be non-negative");
  require(courier_sparse_speed_multiplier > 0, "courier_sparse_speed_multiplier must be positive");
  require(sink_spacing > 0, "sink_spacing must be positive");
  require(static_cast<double>(sink_count) * sink_spacing <= region_x,
          "sink_count * sink_spacing exceeds region_x");
}

void NetworkConfig::set(std::string_view key, std::string_view value) {
  const Field* field = find_field(key);
  if (field == nullptr) throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  field->set(*this, key, trim(value));
}

const std::vector<std::string>& NetworkConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : field_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

std::string NetworkConfig::to_text() const {
  std::string out;
  for (const auto& [name, field] : field_table()) {
    out += name + " = " + field.get(*this) + "\n";
  }
  return out;
}

NetworkConfig parse_config(std::string_view text, NetworkConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

NetworkConfig load_config(const std::filesystem::path& path, NetworkConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), std::move(base));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace uwsn
