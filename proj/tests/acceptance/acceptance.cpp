// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "xplane/app.hpp"
#include "xplane/catalog.hpp"
#include "xplane/platform.hpp"
#include "xplane/provisioner.hpp"
#include "xplane/simulator.hpp"

using namespace xplane;
namespace xt = xplane::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within(double value, double ref, double rel) {
  return std::abs(value - ref) <= rel * std::abs(ref);
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// 1. Demand arithmetic for ten Count-Min instances at 1.43 Mpps.
Outcome arithmetic() {
  Outcome o;
  const auto t0 = Clock::now();
  const AppRequirements app = paper_app();
  const double pps = 1.43e6;
  const double rate = counter_update_rate(app.configs, pps);
  const double bw = update_bandwidth(rate);
  const auto bits = sketch_footprint(app.configs);
  const auto hh = hh_footprint();
  const double hh_bw = hh_bandwidth(pps);
  const double elapsed = seconds_since(t0);

  o.require(rate == 42.9e6, "counter_update_rate == 42.9e6");
  o.require(bw == 343.2e6, "update_bandwidth == 343.2e6");
  o.require(within(bw, 342.2e6, 0.003), "update_bandwidth within 0.3% of 342.2e6");
  o.require(bits == 61'440'000, "sketch_footprint == 61.44e6");
  o.require(within(static_cast<double>(bits), 61.4e6, 0.001), "sketch_footprint within 0.1% of 61.4e6");
  o.require(hh == 1600, "hh_footprint == 1600");
  o.require(hh_bw == 5.72e6, "hh_bandwidth == 5.72e6");
  o.require(hh * 8 == 12'800, "hh bits == 12.8e3");
  o.require(elapsed < 1.0, "runtime < 1 s");
  o.detail << "rate=" << rate << " bw=" << bw << " footprint=" << bits << " hh=" << hh
           << " hh_bw=" << hh_bw << " (" << elapsed * 1e3 << " ms)";
  return o;
}

const Catalog& frozen_catalog() {
  static const Catalog c = load_catalog(std::string(XPLANE_DATA_DIR) + "/catalogs/paper_defaults.json");
  return c;
}

// 2. Three Count-Sketch instances fit the default switch, four do not.
Outcome fit_boundary() {
  Outcome o;
  const AsicModel& asic = frozen_catalog().asic();
  const FitReport three = asic_fit(uniform_app(3, SketchKind::CountSketch).configs, asic);
  const FitReport four = asic_fit(uniform_app(4, SketchKind::CountSketch).configs, asic);
  o.require(three.feasible, "3 instances feasible");
  o.require(!four.feasible, "4 instances infeasible");
  o.detail << "3 -> " << (three.feasible ? "feasible" : "infeasible") << ", 4 -> "
           << (four.feasible ? "feasible" : "infeasible") << " (binding "
           << to_string(four.binding_resource) << ")";
  return o;
}

// 3. FPGA memory and bandwidth check.
Outcome fpga() {
  Outcome o;
  const Catalog& c = frozen_catalog();
  const auto& device = std::get<FpgaModel>(*c.platform("asic_fpga_onchassis").external);
  const FpgaCheck f = fpga_check(device, paper_app().configs, hh_footprint(),
                                 c.constants.fpga_required_bandwidth_Bps);
  o.require(f.demand_bits == 61.44e6 + 12.8e3, "demand == 61.44e6 + 12.8e3 bits");
  o.require(f.capacity_bits == 350e6, "capacity == 350e6 bits");
  o.require(f.memory_fits, "memory reported as fitting");
  o.require(f.required_Bps == 0.51e9 && f.available_Bps == 9.35e9, "0.51 vs 9.35 GB/s");
  o.require(f.bandwidth_fits, "bandwidth reported as fitting");
  o.require(f.headroom_ratio >= 18.0 && f.headroom_ratio <= 18.6, "headroom in [18.0, 18.6]");
  o.detail << "demand=" << f.demand_bits << " bits of " << f.capacity_bits
           << ", headroom=" << f.headroom_ratio;
  return o;
}

// 4. Sketch properties over 100 Zipf(1.1) traces, Count-Sketch unbiasedness.
Outcome sketch_properties() {
  Outcome o;
  const auto t0 = Clock::now();
  const FlowKeyScheme scheme = FlowKeyScheme::five_tuple(0);
  SketchConfig cm;
  cm.rows = 3;
  cm.width = 1000;
  std::size_t one_sided_violations = 0;
  std::size_t conservation_failures = 0;
  double worst_bound_fraction = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Trace t = xt::zipf_trace(10'000, 2'000, 1.1, seed);
    cm.seed = seed;
    SketchInstance s(cm);
    for (const PacketRecord& p : t) s.update(extract_key(p, scheme), 1);
    const auto truth = xt::exact_counts(t, scheme);
    const double n = static_cast<double>(t.size());
    const double slack = std::numbers::e / cm.width * n;
    std::size_t within_bound = 0;
    for (const auto& [k, c] : truth) {
      const auto est = s.query(k);
      if (est < static_cast<std::int64_t>(c)) ++one_sided_violations;
      if (static_cast<double>(est) <= static_cast<double>(c) + slack) ++within_bound;
    }
    worst_bound_fraction = std::min(worst_bound_fraction,
                                    static_cast<double>(within_bound) / static_cast<double>(truth.size()));
    for (std::size_t r = 0; r < cm.rows; ++r) {
      std::int64_t sum = 0;
      for (std::int64_t v : s.row(r)) sum += v;
      if (sum != static_cast<std::int64_t>(t.size())) ++conservation_failures;
    }
  }
  o.require(one_sided_violations == 0, "count-min never underestimates");
  o.require(conservation_failures == 0, "row sums equal N");
  o.require(worst_bound_fraction >= 0.95, ">= 95% of keys within e/w * N");

  // Count-Sketch: average the estimate over 51 independently seeded sketches.
  const Trace t = xt::zipf_trace(10'000, 2'000, 1.1, 0);
  const auto truth = xt::exact_counts(t, scheme);
  const auto top = xt::exact_top_k(truth, 10);
  SketchConfig cs;
  cs.kind = SketchKind::CountSketch;
  cs.rows = 3;
  cs.width = 1024;  // about two flows per column, so collisions are routine
  std::vector<double> mean(top.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 51; ++seed) {
    cs.seed = 1000 + seed;
    SketchInstance s(cs);
    for (const PacketRecord& p : t) s.update(extract_key(p, scheme), 1);
    for (std::size_t i = 0; i < top.size(); ++i) mean[i] += static_cast<double>(s.query(top[i].first)) / 51.0;
  }
  double worst = 0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    const double truth_i = static_cast<double>(top[i].second);
    worst = std::max(worst, std::abs(mean[i] - truth_i) / truth_i);
  }
  o.require(worst <= 0.05, "count-sketch 51-seed mean within 5% for the top 10");
  o.detail << "cm underestimates=" << one_sided_violations
           << ", row-sum mismatches=" << conservation_failures
           << ", worst in-bound fraction=" << worst_bound_fraction
           << "; cs worst top-10 mean error=" << worst * 100 << "% (" << seconds_since(t0) << " s)";
  return o;
}

// 5. Heavy-hitter recall on a 10^6-packet Zipf(1.3) trace.
Outcome heavy_hitters() {
  Outcome o;
  const Trace t = xt::zipf_trace(1'000'000, 100'000, 1.3, 2024);
  const FlowKeyScheme scheme = FlowKeyScheme::five_tuple(0);
  SketchConfig c;
  c.rows = 3;
  c.width = 64'000;
  c.seed = 5;
  MultiDimMonitor m({scheme}, {c}, 100);
  for (const PacketRecord& p : t) m.update(p);
  const auto top = xt::exact_top_k(xt::exact_counts(t, scheme), 100);
  std::size_t hits = 0;
  for (const auto& [k, n] : top) hits += m.slot(0).tracker.contains(k);
  const double recall = static_cast<double>(hits) / static_cast<double>(top.size());
  o.require(recall >= 0.85, "recall@100 >= 0.85");
  o.detail << "recall@100=" << recall << " (" << hits << "/" << top.size() << ")";
  return o;
}

// 6. Simulator consistency.
Outcome simulator() {
  Outcome o;
  const AppRequirements app = paper_app();
  const Trace t = generate(SyntheticSpec{1e5, 0.5, 5'000, 1.1, 3});

  Platform unlimited = frozen_catalog().platform("asic_pim_onchassis");
  std::get<PimModel>(*unlimited.external).per_bank_update_rate = 1e30;
  unlimited.interconnect->bandwidth_Bps = 1e30;
  PlacementPlan mixed = PlacementPlan::all(app.size(), Device::External);
  for (std::size_t i = 0; i < 3; ++i) mixed.assignment[i] = Device::Asic;
  Simulation sim(app, unlimited, mixed, {});
  const SimulationReport full = sim.run(t);
  MultiDimMonitor direct(app.schemes, app.configs, app.hh_k);
  for (const PacketRecord& p : t) direct.update(p);
  o.require(sim.monitor() == direct, "unlimited capacity state == direct replay");
  o.require(full.totals.dropped_updates == 0, "no drops at unlimited capacity");

  // External capacity at half of the offered update rate.
  Platform half = frozen_catalog().platform("asic_pim_onchassis");
  auto& pim = std::get<PimModel>(*half.external);
  const double demand = 1e5 * 30;
  pim.banks = 1;
  pim.per_bank_update_rate = demand / 2;
  half.interconnect->bandwidth_Bps = 1e30;
  const auto all_ext = PlacementPlan::all(app.size(), Device::External);
  const SimulationReport r = simulate(t, half, all_ext, app, {});
  const double frac = static_cast<double>(r.totals.served_updates) /
                      static_cast<double>(r.totals.offered_updates);
  o.require(frac >= 0.49 && frac <= 0.51, "served/offered in [0.49, 0.51]");

  const std::string first = to_json(r).dump();
  bool same = true;
  for (int i = 0; i < 3; ++i) same = same && to_json(simulate(t, half, all_ext, app, {})).dump() == first;
  o.require(same, "3 reruns byte-identical");
  o.detail << "replay identical=" << (sim.monitor() == direct) << ", served/offered=" << frac
           << ", reruns identical=" << same;
  return o;
}

// 7. Branch and bound against exhaustive enumeration.
Outcome solver() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  int agree = 0;
  int feasible = 0;
  for (int i = 0; i < 100; ++i) {
    const auto p = xt::random_problem(rng, 5, 6);
    const ProvisionModel m = build_model(p.inputs, p.app, p.candidates);
    const ProvisionResult got = solve(m);
    const auto want = xt::enumerate_provisioning(m);
    bool ok = got.feasible == want.feasible;
    if (ok && got.feasible) {
      ++feasible;
      const double ref = m.ilp.objective_value(want.x);
      ok = std::abs(*got.objective_value - ref) <= 1e-9 * std::max(1.0, std::abs(ref));
    }
    agree += ok;
  }
  const double elapsed = seconds_since(t0);
  o.require(agree == 100, "100/100 agree");
  o.require(elapsed < 60.0, "runtime < 60 s");
  o.detail << agree << "/100 agree (" << feasible << " feasible), " << elapsed << " s";
  return o;
}

// 8. Partition of the ten-instance app on switch + PIM.
Outcome partitioning() {
  Outcome o;
  const Platform& p = frozen_catalog().platform("asic_pim_onchassis");
  const PartitionManifest m = partition(paper_app(), p);
  const std::string doc = to_json(m).dump(2);
  const auto problems = validate_manifest(to_json(m));
  o.require(m.switch_part.size() == 3, "|switch_part| == 3");
  o.require(m.external_part.size() == 7, "|external_part| == 7");
  o.require(problems.empty(), "manifest schema-valid");
  o.require(doc == to_json(partition(paper_app(), p)).dump(2), "manifest byte-stable");
  o.detail << "switch=" << m.switch_part.size() << " external=" << m.external_part.size()
           << " schema problems=" << problems.size();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"arithmetic", arithmetic},
      {"fit boundary", fit_boundary},
      {"fpga capacity check", fpga},
      {"sketch correctness", sketch_properties},
      {"heavy-hitter quality", heavy_hitters},
      {"simulator consistency", simulator},
      {"solver exactness", solver},
      {"partition", partitioning},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first
              << ": " << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
