#include <doctest.h>

#include <random>
#include <stdexcept>

#include "xplane/app.hpp"
#include "xplane/catalog.hpp"
#include "xplane/error.hpp"
#include "xplane/platform.hpp"

using namespace xplane;

TEST_SUITE("platform") {
  TEST_CASE("demand arithmetic for ten 3-row instances") {
    const AppRequirements app = paper_app();
    const double pps = 1.43e6;
    // Independent arithmetic: every packet touches every row once.
    double rows = 0;
    double bits = 0;
    for (const SketchConfig& c : app.configs) {
      rows += c.rows;
      bits += static_cast<double>(c.rows) * c.width * c.counter_bits;
    }
    CHECK(counter_update_rate(app.configs, pps) == pps * rows);
    CHECK(update_bandwidth(pps * rows) == pps * rows * 4 * 2);
    CHECK(static_cast<double>(sketch_footprint(app.configs)) == bits);
    CHECK(hh_footprint() == 100 * (4 + 4) * 2);
    CHECK(hh_bandwidth(pps) == pps * 4);

    const DemandProfile d = demand_profile(app.configs, pps);
    CHECK(d.counter_updates_per_s == 42.9e6);
    CHECK(d.update_bandwidth_Bps == 343.2e6);
    CHECK(d.counter_footprint_bits == 61'440'000);
    CHECK(d.hh_footprint_bytes == 1600);
    CHECK(d.hh_total_footprint_bytes == 16'000);
    CHECK(d.hh_bandwidth_Bps == 5.72e6);
  }

  TEST_CASE("demand scales linearly with rate") {
    const AppRequirements app = paper_app();
    const DemandProfile a = demand_profile(app.configs, 1e6);
    const DemandProfile b = demand_profile(app.configs, 3e6);
    CHECK(b.counter_updates_per_s == doctest::Approx(3 * a.counter_updates_per_s));
    CHECK(b.update_bandwidth_Bps == doctest::Approx(3 * a.update_bandwidth_Bps));
    CHECK(b.counter_footprint_bits == a.counter_footprint_bits);
    CHECK_THROWS_AS(demand_profile(app.configs, -1), std::invalid_argument);
  }

  TEST_CASE("fit boundary on the default switch") {
    const AsicModel asic = paper_defaults().asic();
    const auto three = uniform_app(3, SketchKind::CountSketch).configs;
    const auto four = uniform_app(4, SketchKind::CountSketch).configs;
    const FitReport ok = asic_fit(three, asic);
    CHECK(ok.feasible);
    CHECK(ok.binding_resource == AsicResource::None);
    const FitReport no = asic_fit(four, asic);
    CHECK_FALSE(no.feasible);
    CHECK(no.binding_resource == AsicResource::Sram);
    CHECK(no.failed_instance == 3u);
    CHECK(rows_per_stage(four[0], asic) == 1);
  }

  TEST_CASE("fit reports the pigeonhole and per-unit limits") {
    AsicModel asic;
    SketchConfig c;
    c.width = 100;
    c.rows = asic.stages + 1;
    FitReport r = asic_fit(std::vector{c}, asic);
    CHECK(r.binding_resource == AsicResource::Stages);

    asic.hash_units_per_stage = 1;
    c.rows = asic.stages;
    r = asic_fit(std::vector{c, c}, asic);
    CHECK_FALSE(r.feasible);
    CHECK(r.binding_resource == AsicResource::HashUnits);

    asic = AsicModel{};
    asic.stateful_alus_per_stage = 1;
    r = asic_fit(std::vector{c, c}, asic);
    CHECK(r.binding_resource == AsicResource::StatefulAlus);
  }

  TEST_CASE("property: placements respect every limit") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 200; ++round) {
      AsicModel asic;
      asic.stages = 2 + rng() % 10;
      asic.sram_bits_per_stage = 1e5 + static_cast<double>(rng() % 3'000'000);
      asic.hash_units_per_stage = 1 + rng() % 6;
      asic.stateful_alus_per_stage = 1 + rng() % 4;
      std::vector<SketchConfig> configs(1 + rng() % 8);
      for (SketchConfig& c : configs) {
        c.rows = 1 + rng() % 4;
        c.width = 500 + rng() % 60'000;
        c.counter_bits = (rng() % 2) ? 16 : 32;
      }
      const FitReport r = asic_fit(configs, asic);
      double sram = 0;
      for (const StageUsage& u : r.stages) {
        CHECK(u.sram_bits <= asic.sram_bits_per_stage);
        CHECK(u.hash_units <= asic.hash_units_per_stage);
        CHECK(u.stateful_alus <= asic.stateful_alus_per_stage);
        sram += u.sram_bits;
      }
      double placed = 0;
      for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& stages = r.row_stages[i];
        if (stages.empty()) continue;
        CHECK(stages.size() == configs[i].rows);
        CHECK(std::set<std::uint32_t>(stages.begin(), stages.end()).size() == stages.size());
        placed += static_cast<double>(configs[i].footprint_bits());
      }
      CHECK(sram == doctest::Approx(placed));
      CHECK(r.feasible == !r.failed_instance.has_value());
    }
  }

  TEST_CASE("property: fit is monotone for uniform instances") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 100; ++round) {
      AsicModel asic;
      asic.stages = 2 + rng() % 12;
      asic.sram_bits_per_stage = 1e6 + static_cast<double>(rng() % 8'000'000);
      SketchConfig c;
      c.rows = 1 + rng() % 4;
      c.width = 1000 + rng() % 100'000;
      bool was_feasible = true;
      std::vector<SketchConfig> configs;
      for (int n = 1; n <= 12; ++n) {
        configs.push_back(c);
        const bool f = asic_fit(configs, asic).feasible;
        CHECK_FALSE((f && !was_feasible));
        was_feasible = f;
      }
    }
  }

  TEST_CASE("property: removing an instance from a feasible set keeps it feasible") {
    std::mt19937_64 rng(13);
    int checked = 0;
    for (int round = 0; round < 300; ++round) {
      AsicModel asic;
      asic.stages = 2 + rng() % 10;
      asic.sram_bits_per_stage = 1e5 + static_cast<double>(rng() % 3'000'000);
      std::vector<SketchConfig> configs(2 + rng() % 6);
      for (SketchConfig& c : configs) {
        c.rows = 1 + rng() % 3;
        c.width = 500 + rng() % 40'000;
      }
      if (!asic_fit(configs, asic).feasible) continue;
      for (std::size_t drop = 0; drop < configs.size(); ++drop) {
        auto fewer = configs;
        fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
        CHECK(asic_fit(fewer, asic).feasible);
        ++checked;
      }
    }
    CHECK(checked > 50);
  }

  TEST_CASE("device capacities") {
    const PimModel pim;
    CapacityProfile c = device_capacity(pim);
    CHECK(c.updates_per_s == 64e6);
    CHECK(c.mem_bits == 8e9);
    const FpgaModel fpga;
    c = device_capacity(fpga);
    CHECK(c.updates_per_s == 9.35e9 / 8);
    CHECK(c.bytes_per_s == 9.35e9);
    CHECK(device_type(ExternalDevice{fpga}) == "fpga");
    CHECK(device_cost(ExternalDevice{pim}) == 4000);
  }

  TEST_CASE("fpga check") {
    const AppRequirements app = paper_app();
    const FpgaCheck f = fpga_check(FpgaModel{}, app.configs, hh_footprint(), 0.51e9);
    CHECK(f.demand_bits == 61'440'000 + 12'800);
    CHECK(f.capacity_bits == 350e6);
    CHECK(f.memory_fits);
    CHECK(f.bandwidth_fits);
    CHECK(f.headroom_ratio == doctest::Approx(9.35 / 0.51));
    CHECK(f.dsp_fraction == doctest::Approx(0.15));
    CHECK(f.dsp_fits);
  }

  TEST_CASE("interconnect defaults and extensibility") {
    const auto on = interconnect_defaults(InterconnectKind::OnChip);
    const auto mid = interconnect_defaults(InterconnectKind::OffChipOnChassis);
    const auto off = interconnect_defaults(InterconnectKind::OffChassis);
    CHECK(on.bandwidth_Bps > mid.bandwidth_Bps);
    CHECK(mid.bandwidth_Bps > off.bandwidth_Bps);
    CHECK(on.latency_s < mid.latency_s);
    CHECK(mid.latency_s < off.latency_s);
    CHECK(on.extensibility() == Extensibility::Low);
    CHECK(off.extensibility() == Extensibility::High);
    CHECK(off.effective_bandwidth_Bps() == doctest::Approx(12.5e9 * 0.9));
    CHECK(parse_interconnect_kind(to_string(InterconnectKind::OffChassis)) ==
          InterconnectKind::OffChassis);
  }

  TEST_CASE("platform validation and capabilities") {
    Platform p;
    p.name = "x";
    CHECK_NOTHROW(p.validate());
    CHECK(p.supports(Capability::CounterUpdate));
    CHECK_FALSE(p.supports(Capability::PriorityQueue));
    p.external = PimModel{};
    CHECK_THROWS_AS(p.validate(), ConfigError);  // device without a link
    p.interconnect = interconnect_defaults(InterconnectKind::OnChip);
    CHECK_NOTHROW(p.validate());
    CHECK(p.supports(Capability::PriorityQueue));
    CHECK(p.cost_usd() == 12'000 + 4'000 + p.interconnect->cost_usd);
    p.asic.stages = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(parse_capability("PriorityQueue") == Capability::PriorityQueue);
  }
}
