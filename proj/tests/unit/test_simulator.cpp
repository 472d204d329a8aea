#include <doctest.h>

#include "oracles.hpp"
#include "xplane/catalog.hpp"
#include "xplane/error.hpp"
#include "xplane/simulator.hpp"

using namespace xplane;

namespace {

Platform pim_platform(double updates_per_s, double link_Bps) {
  Platform p = paper_defaults().platform("asic_pim_onchassis");
  auto& pim = std::get<PimModel>(*p.external);
  pim.banks = 1;
  pim.per_bank_update_rate = updates_per_s;
  p.interconnect->bandwidth_Bps = link_Bps;
  p.interconnect->efficiency = 1.0;
  return p;
}

const Trace& small_trace() {
  static const Trace t = generate(SyntheticSpec{1e5, 0.2, 2000, 1.1, 17});
  return t;
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("device names and placement plans") {
    CHECK(parse_device("asic") == Device::Asic);
    CHECK(parse_device(to_string(Device::External)) == Device::External);
    CHECK_THROWS_AS(parse_device("gpu"), ConfigError);
    const PlacementPlan p = PlacementPlan::all(4, Device::External);
    CHECK(p.count(Device::External) == 4);
    const Platform asic_only = paper_defaults().platform("asic_only");
    CHECK_THROWS_AS(p.validate(asic_only, 4), ConfigError);
    CHECK_THROWS_AS(PlacementPlan::all(3, Device::Asic).validate(asic_only, 4), ConfigError);
  }

  TEST_CASE("unlimited capacity matches direct replay") {
    const AppRequirements app = uniform_app(4, SketchKind::CountSketch);
    Simulation sim(app, pim_platform(1e30, 1e30), PlacementPlan::all(4, Device::External), {});
    const SimulationReport r = sim.run(small_trace());
    MultiDimMonitor direct(app.schemes, app.configs, app.hh_k);
    for (const PacketRecord& p : small_trace()) direct.update(p);
    CHECK(sim.monitor() == direct);
    CHECK(r.totals.served_updates == r.totals.offered_updates);
    CHECK(r.totals.offered_updates == small_trace().size() * 12);
    CHECK(r.totals.dropped_updates == 0);
  }

  TEST_CASE("switch-only placement never touches the link") {
    const AppRequirements app = uniform_app(3, SketchKind::CountMin);
    const Platform p = paper_defaults().platform("asic_only");
    const SimulationReport r = simulate(small_trace(), p, PlacementPlan::all(3, Device::Asic), app, {});
    CHECK(r.totals.interconnect_bytes == 0);
    CHECK(r.totals.external_offered_updates == 0);
    CHECK(r.totals.dropped_updates == 0);
    CHECK(r.totals.demand_bandwidth_Bps == 0);
  }

  TEST_CASE("half capacity serves half") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    const double demand = 1e5 * 6;
    const SimulationReport r =
        simulate(small_trace(), pim_platform(demand / 2, 1e30), PlacementPlan::all(2, Device::External),
                 app, {});
    const double frac = static_cast<double>(r.totals.served_updates) /
                        static_cast<double>(r.totals.offered_updates);
    CHECK(frac >= 0.49);
    CHECK(frac <= 0.51);
    CHECK(r.totals.demand_bandwidth_Bps == doctest::Approx(demand * 8).epsilon(0.001));
  }

  TEST_CASE("the link can be the bottleneck") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    const double demand = 1e5 * 6;
    const SimulationReport r = simulate(small_trace(), pim_platform(1e30, demand * 8 / 4),
                                        PlacementPlan::all(2, Device::External), app, {});
    const double frac = static_cast<double>(r.totals.served_updates) /
                        static_cast<double>(r.totals.offered_updates);
    CHECK(frac == doctest::Approx(0.25).epsilon(0.01));
  }

  TEST_CASE("property: per-epoch accounting") {
    const AppRequirements app = uniform_app(3, SketchKind::CountMin);
    PlacementPlan plan = PlacementPlan::all(3, Device::External);
    plan.assignment[0] = Device::Asic;
    const SimulationReport r = simulate(small_trace(), pim_platform(2e5, 1e30), plan, app, {});
    std::uint64_t packets = 0;
    for (const EpochReport& e : r.epochs) {
      CHECK(e.served_updates + e.dropped_updates == e.offered_updates);
      CHECK(e.external_served_updates <= e.external_offered_updates);
      CHECK(e.external_served_updates <= 2e5 * 0.01 + 1e-9);
      CHECK(e.interconnect_utilization <= 1.0);
      CHECK(e.device_utilization <= 1.0 + 1e-12);
      packets += e.packets;
    }
    CHECK(packets == small_trace().size());
    CHECK(r.totals.packets == small_trace().size());
  }

  TEST_CASE("property: less bandwidth never drops less") {
    const AppRequirements app = uniform_app(2, SketchKind::CountSketch);
    std::uint64_t prev = 0;
    for (double bw : {1e9, 5e6, 2e6, 1e6, 5e5, 1e5}) {
      const SimulationReport r =
          simulate(small_trace(), pim_platform(1e30, bw), PlacementPlan::all(2, Device::External), app, {});
      CHECK(r.totals.dropped_updates >= prev);
      prev = r.totals.dropped_updates;
    }
    CHECK(prev > 0);
  }

  TEST_CASE("latency grows with utilization") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    const auto run = [&](double cap) {
      return simulate(small_trace(), pim_platform(cap, 1e30), PlacementPlan::all(2, Device::External),
                      app, {})
          .totals.mean_update_latency_s;
    };
    CHECK(run(1e7) < run(1e6));
  }

  TEST_CASE("reports are deterministic and seed-dependent") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    const Platform p = pim_platform(3e5, 1e30);
    const auto plan = PlacementPlan::all(2, Device::External);
    SimConfig cfg;
    const std::string a = to_json(simulate(small_trace(), p, plan, app, cfg)).dump();
    CHECK(a == to_json(simulate(small_trace(), p, plan, app, cfg)).dump());
    Simulation s1(app, p, plan, cfg);
    s1.run(small_trace());
    cfg.seed = 99;
    Simulation s2(app, p, plan, cfg);
    s2.run(small_trace());
    CHECK_FALSE(s1.monitor() == s2.monitor());
  }

  TEST_CASE("empty trace is rejected") {
    const AppRequirements app = uniform_app(1, SketchKind::CountMin);
    CHECK_THROWS_AS(simulate(Trace(), paper_defaults().platform("asic_only"),
                             PlacementPlan::all(1, Device::Asic), app, {}),
                    ConfigError);
  }

  TEST_CASE("oracle helpers agree with an independent count") {
    const FlowKeyScheme scheme(2, {FlowField::SrcIp, FlowField::DstIp});
    const OracleCounts counts = oracle_counts(small_trace(), scheme);
    const auto exact = xplane::testing::exact_counts(small_trace(), scheme);
    CHECK(counts.size() == exact.size());
    for (const auto& [k, n] : exact) CHECK(counts.at(k) == n);
    const auto top = true_top_k(counts, 20);
    const auto want = xplane::testing::exact_top_k(exact, 20);
    REQUIRE(top.size() == want.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
      CHECK(top[i].first == want[i].first);
      CHECK(top[i].second == want[i].second);
    }
  }

  TEST_CASE("accuracy of an uncongested wide sketch is perfect") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    const SimulationReport r = simulate(small_trace(), paper_defaults().platform("asic_only"),
                                        PlacementPlan::all(2, Device::Asic), app, {});
    REQUIRE(r.accuracy.size() == 2);
    for (const InstanceAccuracy& a : r.accuracy) {
      CHECK(a.true_top_keys == 100);
      CHECK(a.mean_relative_error < 0.01);
      CHECK(a.hh_recall > 0.95);
    }
    const auto doc = to_json(r);
    CHECK(doc.contains("totals"));
    CHECK(doc["epochs"].size() == r.epochs.size());
  }
}
