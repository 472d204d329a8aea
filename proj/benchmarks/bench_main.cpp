#include <benchmark/benchmark.h>

#include "xplane/app.hpp"
#include "xplane/catalog.hpp"
#include "xplane/monitor.hpp"
#include "xplane/provisioner.hpp"
#include "xplane/simulator.hpp"
#include "xplane/workload.hpp"

namespace {

using namespace xplane;

const Trace& bench_trace() {
  static const Trace trace = generate(SyntheticSpec{1e5, 1.0, 10'000, 1.1, 7});
  return trace;
}

void BM_SketchUpdate(benchmark::State& state) {
  SketchConfig cfg;
  cfg.kind = state.range(0) ? SketchKind::CountSketch : SketchKind::CountMin;
  SketchInstance sketch(cfg);
  const FlowKeyScheme scheme = FlowKeyScheme::five_tuple(cfg.scheme_id);
  const auto& records = bench_trace().records();
  std::size_t i = 0;
  for (auto _ : state) {
    sketch.update(extract_key(records[i], scheme), 1);
    if (++i == records.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SketchUpdate)->Arg(0)->Arg(1);

void BM_MonitorUpdate(benchmark::State& state) {
  const AppRequirements app = paper_app();
  MultiDimMonitor monitor(app.schemes, app.configs, app.hh_k);
  const auto& records = bench_trace().records();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(monitor.update(records[i]));
    if (++i == records.size()) i = 0;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MonitorUpdate);

void BM_Simulate(benchmark::State& state) {
  const AppRequirements app = paper_app();
  const Platform platform = paper_defaults().platform("asic_pim_onchassis");
  const PlacementPlan plan = partition(app, platform).placement(app.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(bench_trace(), platform, plan, app, SimConfig{}));
  }
  state.SetItemsProcessed(state.iterations() * bench_trace().size());
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_Provision(benchmark::State& state) {
  const nlohmann::json scenario = make_scenario(OperatorInputs{}, paper_app(), paper_defaults());
  for (auto _ : state) benchmark::DoNotOptimize(provision(scenario));
}
BENCHMARK(BM_Provision)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
