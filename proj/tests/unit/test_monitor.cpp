#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "xplane/app.hpp"
#include "xplane/monitor.hpp"

using namespace xplane;

TEST_SUITE("monitor") {
  TEST_CASE("construction checks") {
    const auto schemes = reference_schemes();
    CHECK_THROWS_AS(MultiDimMonitor(schemes, {}), std::invalid_argument);
    SketchConfig bad;
    bad.scheme_id = 99;
    CHECK_THROWS_AS(MultiDimMonitor(schemes, {bad}), std::invalid_argument);
    SketchConfig a;
    CHECK_THROWS_AS(MultiDimMonitor(schemes, {a, a}), std::invalid_argument);
  }

  TEST_CASE("every instance sees every packet") {
    const AppRequirements app = paper_app();
    MultiDimMonitor m(app.schemes, app.configs, app.hh_k);
    CHECK(m.dimension() == 10);
    CHECK(m.rows_per_packet() == 30);
    const Trace t = xplane::testing::zipf_trace(3000, 400, 1.1, 3);
    std::uint64_t updates = 0;
    for (const PacketRecord& p : t) updates += m.update(p).counter_updates;
    CHECK(updates == 30 * t.size());
    for (const MonitorSlot& s : m.slots()) {
      const auto truth = xplane::testing::exact_counts(t, s.scheme);
      for (const auto& [k, n] : truth) CHECK(s.sketch.query(k) >= static_cast<std::int64_t>(n));
      CHECK(s.tracker.check_invariants());
    }
  }

  TEST_CASE("byte weighting") {
    const AppRequirements app = uniform_app(1, SketchKind::CountMin);
    MultiDimMonitor m(app.schemes, app.configs, 10, WeightMode::Bytes);
    PacketRecord p;
    p.src_ip = 1;
    p.len_bytes = 700;
    m.update(p);
    m.update(p);
    CHECK(m.slot(0).sketch.query(extract_key(p, app.schemes[0])) == 1400);
    CHECK(m.slot(0).tracker.estimate(extract_key(p, app.schemes[0])) == 1400);
  }

  TEST_CASE("membership changes and refreshes are counted separately") {
    const AppRequirements app = uniform_app(1, SketchKind::CountMin);
    MultiDimMonitor m(app.schemes, app.configs, 10);
    PacketRecord p;
    p.src_ip = 7;
    UpdateStats s = m.update(p);
    CHECK(s.hh_accepted == 1);
    CHECK(s.hh_refreshed == 0);
    s = m.update(p);
    CHECK(s.hh_accepted == 0);
    CHECK(s.hh_refreshed == 1);
  }

  TEST_CASE("filtered update skips rows") {
    const AppRequirements app = uniform_app(2, SketchKind::CountMin);
    MultiDimMonitor m(app.schemes, app.configs, 10);
    PacketRecord p;
    const UpdateStats s = m.update_filtered(p, [](std::size_t i, std::size_t r) {
      return i == 1 && r == 0;
    });
    CHECK(s.counter_updates == 1);
    CHECK(m.slot(0).sketch.query(extract_key(p, app.schemes[0])) == 0);
    CHECK(m.slot(1).sketch.query(extract_key(p, app.schemes[1])) == 0);
    const auto& cs = m.slot(1).sketch;
    CHECK(cs.counter(0, cs.column(0, extract_key(p, app.schemes[1]))) == 1);
  }
}
