#include "uwsn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace uwsn {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::AliveNodes: return "alive_nodes";
    case Metric::DeadNodes: return "dead_nodes";
    case Metric::AvgEnergyPerRound: return "avg_energy_per_round";
    case Metric::Throughput: return "throughput";
    case Metric::LossProbability: return "loss_probability";
  }
  return "unknown";
}

double RoundMetrics::value(Metric metric) const {
  switch (metric) {
    case Metric::AliveNodes: return alive_nodes;
    case Metric::DeadNodes: return dead_nodes;
    case Metric::AvgEnergyPerRound: return avg_energy_per_round;
    case Metric::Throughput: return throughput;
    case Metric::LossProbability: return loss_probability;
  }
  return 0.0;
}

RoundMetrics round_metrics(const RoundRecord& record, std::uint32_t alive) {
  RoundMetrics m;
  m.alive_nodes = record.alive;
  m.dead_nodes = record.dead;
  m.avg_energy_per_round = record.energy_consumed / std::max<std::uint32_t>(alive, 1);
  m.throughput = static_cast<double>(record.delivered) + record.collected;
  m.loss_probability = static_cast<double>(record.dropped) / std::max<std::uint32_t>(record.generated, 1);
  return m;
}

MetricSeries make_series(std::span<const RoundRecord> records, Metric metric, std::uint64_t run_id) {
  MetricSeries s{metric, {}, run_id};
  s.values.reserve(records.size());
  for (const RoundRecord& r : records) s.values.push_back(round_metrics(r, r.active).value(metric));
  return s;
}

MetricSeries cumulative_throughput(std::span<const RoundRecord> records, std::uint64_t run_id) {
  MetricSeries s{Metric::Throughput, {}, run_id};
  double total = 0.0;
  for (const RoundRecord& r : records) {
    total += round_metrics(r, r.active).throughput;
    s.values.push_back(total);
  }
  return s;
}

double student_t_critical(double confidence, std::uint32_t dof) {
  if (dof == 0) return 0.0;
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
}

AggregateSeries aggregate_runs(std::span<const MetricSeries> series, double confidence) {
  if (series.empty()) throw std::invalid_argument("aggregate_runs needs at least one series");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0,1)");
  AggregateSeries agg;
  agg.metric = series.front().metric;
  agg.runs = static_cast<std::uint32_t>(series.size());
  std::size_t length = 0;
  for (const MetricSeries& s : series) {
    if (s.metric != agg.metric) throw std::invalid_argument("aggregate_runs: mixed metrics");
    length = std::max(length, s.values.size());
  }

  const double n = static_cast<double>(series.size());
  const double t = student_t_critical(confidence, agg.runs - 1);
  agg.mean.reserve(length);
  agg.half_width.reserve(length);
  std::vector<double> column(series.size());
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t k = 0; k < series.size(); ++k) {
      const auto& v = series[k].values;
      column[k] = v.empty() ? 0.0 : (i < v.size() ? v[i] : v.back());
    }
    double mean = 0.0;
    for (double x : column) mean += x;
    mean /= n;
    double hw = 0.0;
    if (series.size() > 1) {
      double ss = 0.0;
      for (double x : column) ss += (x - mean) * (x - mean);
      hw = t * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    agg.mean.push_back(mean);
    agg.half_width.push_back(hw);
  }
  return agg;
}

LifetimeSummary lifetime_summary(std::span<const RoundRecord> records) {
  if (records.empty()) throw std::invalid_argument("lifetime_summary needs records");
  LifetimeSummary out;
  for (const RoundRecord& r : records) {
    if (!out.first_death_round && r.dead > 0) {
      out.first_death_round = r.round;
      out.stability_end = r.round;
    }
    if (r.alive == 0) {
      out.lifetime_rounds = r.round;
      return out;
    }
  }
  out.lifetime_rounds = records.back().round;
  return out;
}

double mean_loss_probability(std::span<const RoundRecord> records) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const RoundRecord& r : records) {
    if (r.generated == 0) continue;
    sum += round_metrics(r, r.active).loss_probability;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

std::optional<double> residual_stddev_at_first_death(std::span<const RoundRecord> records) {
  for (const RoundRecord& r : records) {
    if (r.dead > 0) return r.residual_stddev;
  }
  return std::nullopt;
}

namespace {

void append_fixed(std::string& out, double v) {
  char buf[64];
  // Negative zero would print as "-0.000000".
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace

std::string format_csv(const AggregateSeries& aggregate, const AggregateSeries* extra, std::string_view extra_name) {
  std::string out = "round,mean,ci_low,ci_high";
  if (extra) {
    const std::string p(extra_name);
    out += "," + p + "_mean," + p + "_ci_low," + p + "_ci_high";
  }
  out += '\n';
  for (std::size_t i = 0; i < aggregate.mean.size(); ++i) {
    out += std::to_string(i + 1);
    for (const AggregateSeries* a : {&aggregate, extra}) {
      if (a == nullptr) continue;
      const double m = i < a->mean.size() ? a->mean[i] : 0.0;
      const double h = i < a->half_width.size() ? a->half_width[i] : 0.0;
      out += ',';
      append_fixed(out, m);
      out += ',';
      append_fixed(out, m - h);
      out += ',';
      append_fixed(out, m + h);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const AggregateSeries& aggregate, const std::filesystem::path& path, const AggregateSeries* extra,
              std::string_view extra_name) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::string text = format_csv(aggregate, extra, extra_name);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<CsvRow> rows;
  std::string line;
  std::getline(in, line);
  if (line.rfind("round,mean,ci_low,ci_high", 0) != 0) throw std::runtime_error(path.string() + ": bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CsvRow row;
    char comma = 0;
    std::istringstream ss(line);
    if (!(ss >> row.round >> comma >> row.mean >> comma >> row.ci_low >> comma >> row.ci_high)) {
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path metric_csv_path(const std::filesystem::path& dir, Metric metric, ProtocolKind protocol) {
  return dir / (std::string(to_string(metric)) + "_" + std::string(to_string(protocol)) + ".csv");
}

}  // namespace uwsn
