#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "uwsn/metrics.hpp"

namespace uwsn::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CliError("invalid seed '" + text + "'", 2);
  }
}

}  // namespace

RunRequest parse_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("uwsn-sim");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

RunRequest parse_args(int argc, const char* const* argv) {
  CLI::App app{"Depth-based routing simulator for underwater acoustic sensor networks"};
  std::string config_path;
  std::string protocols = "amctd,dbr,eedbr";
  std::string seeds;
  std::uint32_t runs = 0;
  std::string out_dir;
  std::vector<std::string> overrides;
  unsigned jobs = 0;
  double confidence = 0.95;

  app.add_option("--config", config_path, "key = value scenario file");
  app.add_option("--protocol", protocols, "comma-separated subset of amctd,dbr,eedbr");
  app.add_option("--seeds", seeds, "comma-separated list of seeds");
  app.add_option("--runs", runs, "number of runs; seeds rng_seed .. rng_seed+runs-1");
  app.add_option("--out", out_dir, "output directory (default: $UWSN_SIM_OUT or ./results)");
  app.add_option("--set", overrides, "override a config key: key=value (repeatable)");
  app.add_option("--jobs", jobs, "parallel runs (default: hardware threads)");
  app.add_option("--confidence", confidence, "confidence level for intervals")->check(CLI::Range(0.5, 0.999));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw CliError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw CliError(std::string(e.what()) + "\n" + app.help(), 2);
  }

  RunRequest req;
  try {
    if (!config_path.empty()) req.config = load_config(config_path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      req.config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    req.config.validate();
    for (const std::string& p : split_list(protocols)) {
      const ProtocolKind kind = parse_protocol(p);
      if (std::find(req.protocols.begin(), req.protocols.end(), kind) == req.protocols.end()) {
        req.protocols.push_back(kind);
      }
    }
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(e.what(), 2);
  }
  if (req.protocols.empty()) throw CliError("at least one protocol is required", 2);

  if (!seeds.empty()) {
    if (runs != 0) throw CliError("--seeds and --runs are mutually exclusive", 2);
    for (const std::string& s : split_list(seeds)) req.seeds.push_back(parse_seed(s));
  } else {
    const std::uint32_t n = runs != 0 ? runs : req.config.run_count;
    for (std::uint32_t i = 0; i < n; ++i) req.seeds.push_back(req.config.rng_seed + i);
  }
  if (req.seeds.empty()) throw CliError("at least one seed is required", 2);

  if (!out_dir.empty()) {
    req.out_dir = out_dir;
  } else if (const char* env = std::getenv("UWSN_SIM_OUT"); env != nullptr && *env != '\0') {
    req.out_dir = env;
  } else {
    req.out_dir = "results";
  }
  req.jobs = jobs != 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
  req.confidence = confidence;
  return req;
}

ExperimentResults run_experiment(const RunRequest& request) {
  struct Job {
    ProtocolKind protocol;
    std::size_t seed_index;
  };
  std::vector<Job> jobs;
  for (ProtocolKind p : request.protocols) {
    for (std::size_t i = 0; i < request.seeds.size(); ++i) jobs.push_back(Job{p, i});
  }

  ExperimentResults results;
  for (ProtocolKind p : request.protocols) results.runs[p].resize(request.seeds.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      results.runs.at(job.protocol)[job.seed_index] =
          run_simulation(request.config, job.protocol, request.seeds[job.seed_index]);
    }
  };
  const unsigned threads = std::min<unsigned>(std::max(1u, request.jobs), static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return results;
}

std::string summary_table(const RunRequest& request, const ExperimentResults& results) {
  std::ostringstream os;
  os << "seeds:";
  for (std::uint64_t s : request.seeds) os << ' ' << s;
  os << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %12s %12s %16s %12s\n", "protocol", "first_death", "lifetime",
                "total_delivered", "mean_loss");
  os << line;
  for (ProtocolKind p : request.protocols) {
    const auto& runs = results.runs.at(p);
    double first = 0.0;
    double life = 0.0;
    double delivered = 0.0;
    double loss = 0.0;
    std::size_t with_death = 0;
    for (const auto& records : runs) {
      if (records.empty()) continue;
      const LifetimeSummary s = lifetime_summary(records);
      if (s.first_death_round) {
        first += *s.first_death_round;
        ++with_death;
      }
      life += s.lifetime_rounds;
      for (const RoundRecord& r : records) delivered += static_cast<double>(r.delivered) + r.collected;
      loss += mean_loss_probability(records);
    }
    const double n = runs.empty() ? 1.0 : static_cast<double>(runs.size());
    char first_text[32];
    if (with_death) {
      std::snprintf(first_text, sizeof first_text, "%.1f", first / static_cast<double>(with_death));
    } else {
      std::snprintf(first_text, sizeof first_text, "none");
    }
    std::snprintf(line, sizeof line, "%-8s %12s %12.1f %16.1f %12.6f\n", std::string(to_string(p)).c_str(),
                  first_text, life / n, delivered / n, loss / n);
    os << line;
  }
  return os.str();
}

int execute(const RunRequest& request, std::ostream& out, std::ostream& err) {
  if (request.protocols.empty() || request.seeds.empty()) {
    err << "error: at least one protocol and one seed are required\n";
    return 2;
  }
  try {
    std::filesystem::create_directories(request.out_dir);
    const ExperimentResults results = run_experiment(request);

    for (ProtocolKind p : request.protocols) {
      const auto& runs = results.runs.at(p);
      for (Metric m : kAllMetrics) {
        std::vector<MetricSeries> series;
        for (std::size_t i = 0; i < runs.size(); ++i) series.push_back(make_series(runs[i], m, request.seeds[i]));
        const AggregateSeries agg = aggregate_runs(series, request.confidence);
        const auto path = metric_csv_path(request.out_dir, m, p);
        if (m == Metric::Throughput) {
          std::vector<MetricSeries> cumulative;
          for (std::size_t i = 0; i < runs.size(); ++i) {
            cumulative.push_back(cumulative_throughput(runs[i], request.seeds[i]));
          }
          const AggregateSeries cum = aggregate_runs(cumulative, request.confidence);
          emit_csv(agg, path, &cum, "cumulative");
        } else {
          emit_csv(agg, path);
        }
      }
    }

    const std::string table = summary_table(request, results);
    const auto summary_path = request.out_dir / "summary.txt";
    std::ofstream summary(summary_path, std::ios::binary | std::ios::trunc);
    if (!summary) throw std::runtime_error("cannot open " + summary_path.string() + " for writing");
    summary << table;
    out << table;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace uwsn::cli
