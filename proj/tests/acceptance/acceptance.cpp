// Acceptance checks. Prints one PASS/FAIL line per criterion; exits non-zero
// if any selected criterion fails. `--only N` runs a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "uwsn/engine.hpp"
#include "uwsn/metrics.hpp"
#include "uwsn/rng.hpp"

using namespace uwsn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Schedule table, every dead count of the reference network.
Outcome schedule_table() {
  const auto start = std::chrono::steady_clock::now();
  const ProtocolState base = initial_state(225, NetworkConfig{});
  std::uint32_t violations = 0;
  for (std::uint32_t d = 0; d <= 225; ++d) {
    const Regime regime = d < 5 ? Regime::Eq1 : d < 180 ? Regime::Eq2 : Regime::Eq3;
    const double threshold = d < 5 ? 60.0 : d <= 200 ? 40.0 : 20.0;
    const CourierPhase phase = d >= 169 ? CourierPhase::Sparse : CourierPhase::Initial;
    const ProtocolState s = update_state(d, base);
    if (s.regime != regime || s.depth_threshold != threshold || s.courier_phase != phase || s.dead_count != d) {
      ++violations;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {violations == 0 && secs < 1.0, fmt("%u violations over 226 dead counts, %.4f s", violations, secs)};
}

// 2. Weight formulas against direct evaluation.
Outcome weight_oracle() {
  Rng rng(20240601);
  double worst = 0.0;
  for (Regime r : {Regime::Eq1, Regime::Eq2, Regime::Eq3}) {
    for (int i = 0; i < 1000; ++i) {
      NetworkConfig c;
      const double res = 0.01 + rng.uniform() * 69.99;
      const double depth = 1.0 + rng.uniform() * 498.0;
      c.priority_value = 0.1 + rng.uniform() * 9.9;
      const double p = c.priority_value;
      double expected = 0.0;
      switch (r) {
        case Regime::Eq1: expected = p * res / (500.0 - depth); break;
        case Regime::Eq2: expected = p * depth / res; break;
        case Regime::Eq3: expected = res / (p * depth); break;
      }
      const double got = weight(res, depth, r, c);
      worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
  }
  return {worst <= 1e-12, fmt("3000 triples, worst relative error %.3g", worst)};
}

// 3. Brute-force duplicate suppression on small fully connected groups.
Outcome duplicate_suppression() {
  Rng rng(3);
  std::uint32_t violations = 0;
  std::uint32_t relays_checked = 0;
  std::uint32_t courier_cases = 0;
  std::string first_violation;
  for (int k = 0; k < 200; ++k) {
    const std::uint32_t n = k % 2 == 0 ? 3 : 4;
    const bool with_courier = k % 4 >= 2;
    NetworkConfig c;
    c.node_count = n;
    c.sink_count = 1;
    c.courier_count = with_courier ? 1 : 0;
    c.loss_base = 0.0;
    Topology t = generate_topology(c, static_cast<std::uint64_t>(k));
    // Source at 365 m; nodes 1 and 2 always clear the 60 m threshold, node 3
    // may not. Within +-5 m horizontally every pair is < 100 m apart.
    const NodeId src = 0;
    for (SensorNode& node : t.nodes) {
      const double depth = node.id == 0 ? 365.0 : 275.0 + rng.uniform() * (node.id == 3 ? 90.0 : 30.0);
      node.position = {300.0 + (rng.uniform() - 0.5) * 10.0, 300.0 + (rng.uniform() - 0.5) * 10.0, depth};
    }
    if (with_courier) {
      t.couriers[0].position = {300.0, 300.0, 320.0};
      ++courier_cases;
    }

    Simulation sim(c, ProtocolKind::Amctd, t, static_cast<std::uint64_t>(k));
    sim.restrict_sources(std::vector<NodeId>{src});
    sim.enable_trace(true);
    sim.run_round();

    auto fail = [&](const std::string& why) {
      if (violations++ == 0) first_violation = fmt("case %d: %s", k, why.c_str());
    };
    std::map<NodeId, std::vector<NodeId>> children;
    std::map<NodeId, int> sends;
    bool collected = false;
    for (const TxTrace& tr : sim.trace()) {
      if (tr.kind == TxTrace::Kind::Source || tr.kind == TxTrace::Kind::Relay) ++sends[tr.node];
      if (tr.kind == TxTrace::Kind::Relay || tr.kind == TxTrace::Kind::Discard) {
        children[tr.cause].push_back(tr.node);
        if (collected) fail("sensor retransmission after courier ACK");
      }
      if (tr.kind == TxTrace::Kind::CourierAck) collected = true;
    }
    for (const auto& [node, count] : sends) {
      if (count > 1) fail(fmt("node %u transmitted %d times", node, count));
    }
    if (with_courier) {
      if (!collected) fail("courier in range did not collect");
      if (!children.empty()) fail("sensor relayed although a courier collected");
      continue;
    }
    for (const auto& [sender, _] : sends) {
      const auto choice = select_forwarder(eligible_neighbors(sim.nodes()[sender], sim.state()), sim.state());
      const auto& kids = children[sender];
      ++relays_checked;
      if (!choice && !kids.empty()) fail("relay without an eligible forwarder");
      if (choice && (kids.size() != 1 || kids[0] != *choice)) {
        fail(fmt("sender %u: %zu nodes took the packet, expected only node %u", sender, kids.size(), *choice));
      }
    }
  }
  std::string detail = fmt("200 cases (%u with courier), %u hops checked, %u violations", courier_cases,
                           relays_checked, violations);
  if (!first_violation.empty()) detail += "; " + first_violation;
  return {violations == 0, detail};
}

// 4. Packet and energy conservation on a small desk network.
Outcome conservation() {
  std::uint32_t bad_rounds = 0;
  double worst_energy = 0.0;
  std::uint32_t deaths = 0;
  std::uint64_t collected = 0;
  for (double loss : {0.0, 0.1}) {
    for (ProtocolKind p : {ProtocolKind::Amctd, ProtocolKind::Dbr, ProtocolKind::Eedbr}) {
      NetworkConfig c;
      c.node_count = 20;
      c.region_x = c.region_y = c.water_depth = 200.0;
      c.sink_count = 2;
      c.courier_count = 2;
      c.initial_energy = 5.0;
      c.loss_base = loss;
      Simulation sim(c, p, 7);
      double consumed = 0.0;
      std::uint64_t buffered = 0;
      for (int r = 0; r < 500; ++r) {
        const RoundRecord rec = sim.run_round();
        consumed += rec.energy_consumed;
        buffered = buffered + rec.collected - rec.courier_flushed;
        collected += rec.collected;
        if (rec.generated != rec.delivered + rec.dropped + rec.collected) ++bad_rounds;
        if (rec.buffered != buffered || rec.buffered != sim.awaiting_flush()) ++bad_rounds;
        if (std::abs(rec.energy_tx + rec.energy_rx + rec.energy_idle - rec.energy_consumed) > 1e-9) ++bad_rounds;
        worst_energy = std::max(
            worst_energy, std::abs(consumed - (sim.initial_energy_total() - sim.residual_energy_total())));
      }
      deaths += c.node_count - sim.alive_count();
    }
  }
  return {bad_rounds == 0 && worst_energy <= 1e-9,
          fmt("6 runs x 500 rounds: %u bad rounds, worst energy gap %.3g J, %u deaths, %llu courier pickups",
              bad_rounds, worst_energy, deaths, static_cast<unsigned long long>(collected))};
}

std::map<std::string, std::string> read_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[entry.path().filename().string()] = os.str();
  }
  return files;
}

// 5. Two full reference runs with seed 42 give identical files.
Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "uwsn_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::map<std::string, std::string>> outputs;
  for (const char* name : {"a", "b"}) {
    cli::RunRequest req = cli::parse_args(std::vector<std::string>{"--seeds", "42", "--jobs", "3"});
    req.out_dir = root / name;
    std::ostringstream sink;
    if (cli::execute(req, sink, sink) != 0) return {false, "execute failed: " + sink.str()};
    outputs.push_back(read_dir(req.out_dir));
  }
  std::filesystem::remove_all(root);
  std::size_t csvs = 0;
  for (const auto& [name, _] : outputs[0]) csvs += name.ends_with(".csv");
  const bool same = outputs[0] == outputs[1];
  return {same && csvs == 15, fmt("%zu CSV files, byte-identical: %s", csvs, same ? "yes" : "no")};
}

struct Comparison {
  struct PerProtocol {
    std::vector<double> first_death;
    std::vector<double> lifetime;
    std::vector<double> stddev;
    std::vector<double> loss;
  };
  std::vector<std::uint64_t> seeds;
  std::map<ProtocolKind, PerProtocol> by;
};

const Comparison& comparison() {
  static const Comparison result = [] {
    cli::RunRequest req = cli::parse_args(std::vector<std::string>{"--out", "unused"});
    const cli::ExperimentResults runs = cli::run_experiment(req);
    Comparison c;
    c.seeds = req.seeds;
    for (const auto& [p, per_seed] : runs.runs) {
      for (const auto& records : per_seed) {
        const LifetimeSummary s = lifetime_summary(records);
        c.by[p].first_death.push_back(s.first_death_round ? *s.first_death_round : records.back().round + 1.0);
        c.by[p].lifetime.push_back(s.lifetime_rounds);
        c.by[p].stddev.push_back(residual_stddev_at_first_death(records).value_or(0.0));
        c.by[p].loss.push_back(mean_loss_probability(records));
      }
    }
    return c;
  }();
  return result;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// 6. Lifetime ordering across protocols.
Outcome lifetime_ordering() {
  const Comparison& c = comparison();
  const double fa = mean(c.by.at(ProtocolKind::Amctd).first_death);
  const double fe = mean(c.by.at(ProtocolKind::Eedbr).first_death);
  const double fd = mean(c.by.at(ProtocolKind::Dbr).first_death);
  const double la = mean(c.by.at(ProtocolKind::Amctd).lifetime);
  const double le = mean(c.by.at(ProtocolKind::Eedbr).lifetime);
  const double ld = mean(c.by.at(ProtocolKind::Dbr).lifetime);
  const bool first_ok = fa > fe && fe > fd;
  const bool last_ok = la > le && la > ld;
  return {first_ok && last_ok,
          fmt("first death amctd %.1f, eedbr %.1f, dbr %.1f (%s); all dead amctd %.1f, eedbr %.1f, dbr %.1f (%s)", fa,
              fe, fd, first_ok ? "ordered" : "not ordered", la, le, ld, last_ok ? "amctd last" : "amctd not last")};
}

// 7. Residual-energy spread at first death, per seed.
Outcome energy_spread() {
  const Comparison& c = comparison();
  const auto& a = c.by.at(ProtocolKind::Amctd).stddev;
  const auto& d = c.by.at(ProtocolKind::Dbr).stddev;
  std::string detail;
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ok = ok && a[i] < d[i];
    detail += fmt("%sseed %llu: amctd %.3f vs dbr %.3f", i ? "; " : "", static_cast<unsigned long long>(c.seeds[i]),
                  a[i], d[i]);
  }
  return {ok, detail};
}

// 8. Lifetime-mean loss probability, per seed.
Outcome loss_ordering() {
  const Comparison& c = comparison();
  const auto& a = c.by.at(ProtocolKind::Amctd).loss;
  const auto& d = c.by.at(ProtocolKind::Dbr).loss;
  const auto& e = c.by.at(ProtocolKind::Eedbr).loss;
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ok = ok && a[i] <= d[i] && a[i] <= e[i];
    detail += fmt("%sseed %llu: amctd %.4f, dbr %.4f, eedbr %.4f", i ? "; " : "",
                  static_cast<unsigned long long>(c.seeds[i]), a[i], d[i], e[i]);
  }
  return {ok, detail};
}

// 9. Confidence interval on {10, 12, 14}.
Outcome statistics_oracle() {
  const std::vector<MetricSeries> runs{{Metric::AliveNodes, {10}, 0}, {Metric::AliveNodes, {12}, 1},
                                       {Metric::AliveNodes, {14}, 2}};
  const AggregateSeries a = aggregate_runs(runs, 0.95);
  const double expected = 4.3027 * 2.0 / std::sqrt(3.0);
  const bool ok = std::abs(a.mean[0] - 12.0) <= 1e-3 && std::abs(a.half_width[0] - expected) <= 1e-3;
  return {ok, fmt("mean %.6f, half-width %.6f (expected %.6f)", a.mean[0], a.half_width[0], expected)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"schedule table", schedule_table},
      {"weight oracle", weight_oracle},
      {"duplicate suppression", duplicate_suppression},
      {"conservation", conservation},
      {"determinism", determinism},
      {"lifetime ordering", lifetime_ordering},
      {"energy spread at first death", energy_spread},
      {"loss probability ordering", loss_ordering},
      {"statistics oracle", statistics_oracle},
  };

  std::optional<std::size_t> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::strtoul(argv[++i], nullptr, 10);
      if (*only < 1 || *only > criteria.size()) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && *only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %-30s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
