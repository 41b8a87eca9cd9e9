#include <benchmark/benchmark.h>

#include "uwsn/amctd.hpp"
#include "uwsn/engine.hpp"
#include "uwsn/metrics.hpp"

using namespace uwsn;

static void BM_UpdateState(benchmark::State& state) {
  const ProtocolState base = initial_state(225, NetworkConfig{});
  std::uint32_t d = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(update_state(d, base));
    d = (d + 1) % 226;
  }
}
BENCHMARK(BM_UpdateState);

static void BM_SelectForwarder(benchmark::State& state) {
  const NetworkConfig c;
  SensorNode src;
  src.position.depth = 450.0;
  for (NodeId i = 0; i < static_cast<NodeId>(state.range(0)); ++i) {
    NeighborEntry e;
    e.id = i;
    e.depth = 450.0 - 10.0 * (i % 10);
    e.residual_energy = 70.0 - i % 7;
    e.weight = weight(e.residual_energy, e.depth, Regime::Eq1, c);
    src.neighbor_table.push_back(e);
  }
  const ProtocolState s = initial_state(225, c);
  for (auto _ : state) {
    const auto eligible = eligible_neighbors(src, s);
    benchmark::DoNotOptimize(select_forwarder(eligible, s));
  }
}
BENCHMARK(BM_SelectForwarder)->Arg(8)->Arg(32)->Arg(128);

static void BM_ReferenceRound(benchmark::State& state) {
  const auto protocol = static_cast<ProtocolKind>(state.range(0));
  Simulation sim(NetworkConfig{}, protocol, 42);
  for (auto _ : state) benchmark::DoNotOptimize(sim.run_round());
}
BENCHMARK(BM_ReferenceRound)->Arg(0)->Arg(1)->Arg(2);

static void BM_FullRun(benchmark::State& state) {
  const auto protocol = static_cast<ProtocolKind>(state.range(0));
  for (auto _ : state) {
    const auto records = run_simulation(NetworkConfig{}, protocol, 42);
    benchmark::DoNotOptimize(records.size());
  }
}
BENCHMARK(BM_FullRun)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_Aggregate(benchmark::State& state) {
  std::vector<MetricSeries> runs;
  for (int k = 0; k < 3; ++k) {
    MetricSeries s{Metric::AliveNodes, std::vector<double>(15000, 100.0 + k), static_cast<std::uint64_t>(k)};
    runs.push_back(std::move(s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_runs(runs));
}
BENCHMARK(BM_Aggregate);
BENCHMARK_MAIN();
