#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uwsn/engine.hpp"

namespace uwsn {

enum class Metric { AliveNodes, DeadNodes, AvgEnergyPerRound, Throughput, LossProbability };
inline constexpr std::array<Metric, 5> kAllMetrics{Metric::AliveNodes, Metric::DeadNodes, Metric::AvgEnergyPerRound,
                                                   Metric::Throughput, Metric::LossProbability};

std::string_view to_string(Metric metric);

struct RoundMetrics {
  double alive_nodes = 0.0;
  double dead_nodes = 0.0;
  double avg_energy_per_round = 0.0;  // J per active node
  double throughput = 0.0;            // packets that reached a sink or a courier
  double loss_probability = 0.0;

  double value(Metric metric) const;
};

// `alive` is the number of nodes active during the round.
RoundMetrics round_metrics(const RoundRecord& record, std::uint32_t alive);

struct MetricSeries {
  Metric metric = Metric::AliveNodes;
  std::vector<double> values;  // index i is round i + 1
  std::uint64_t run_id = 0;
};

MetricSeries make_series(std::span<const RoundRecord> records, Metric metric, std::uint64_t run_id);

// Running total of throughput.
MetricSeries cumulative_throughput(std::span<const RoundRecord> records, std::uint64_t run_id);

struct AggregateSeries {
  Metric metric = Metric::AliveNodes;
  std::vector<double> mean;
  std::vector<double> half_width;
  std::uint32_t runs = 0;
};

// Two-sided Student-t quantile t such that P(|T| <= t) = confidence with
// `dof` degrees of freedom.
double student_t_critical(double confidence, std::uint32_t dof);

// Per-round mean and Student-t half-width. Shorter series are padded with
// their final value. Throws std::invalid_argument on mixed metrics or no input.
AggregateSeries aggregate_runs(std::span<const MetricSeries> series, double confidence = 0.95);

struct LifetimeSummary {
  std::optional<std::uint32_t> first_death_round;
  std::optional<std::uint32_t> stability_end;
  std::uint32_t lifetime_rounds = 0;
};

// Lifetime is the first round with no node alive, else the last recorded round.
LifetimeSummary lifetime_summary(std::span<const RoundRecord> records);

// Mean per-round loss probability over rounds that generated traffic.
double mean_loss_probability(std::span<const RoundRecord> records);

// Residual-energy spread across alive nodes at the end of the first round
// with a death; nullopt if nobody died.
std::optional<double> residual_stddev_at_first_death(std::span<const RoundRecord> records);

struct CsvRow {
  std::uint32_t round = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Header `round,mean,ci_low,ci_high`, LF endings, six fractional digits.
// When `extra` is given its mean and bounds follow as three more columns
// prefixed with `extra_name`. Throws std::runtime_error naming the path.
void emit_csv(const AggregateSeries& aggregate, const std::filesystem::path& path,
              const AggregateSeries* extra = nullptr, std::string_view extra_name = {});

std::string format_csv(const AggregateSeries& aggregate, const AggregateSeries* extra = nullptr,
                       std::string_view extra_name = {});

std::vector<CsvRow> read_csv(const std::filesystem::path& path);

std::filesystem::path metric_csv_path(const std::filesystem::path& dir, Metric metric, ProtocolKind protocol);

}  // namespace uwsn
