#include "xplane/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "xplane/error.hpp"

namespace xplane {

using nlohmann::json;

std::string_view to_string(Device d) noexcept {
  return d == Device::Asic ? "asic" : "external";
}

Device parse_device(std::string_view name) {
  if (name == "asic") return Device::Asic;
  if (name == "external") return Device::External;
  throw ConfigError("unknown device '" + std::string(name) + "'");
}

PlacementPlan PlacementPlan::all(std::size_t instances, Device d) {
  return {std::vector<Device>(instances, d), d};
}

std::size_t PlacementPlan::count(Device d) const noexcept {
  return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), d));
}

void PlacementPlan::validate(const Platform& platform, std::size_t instances) const {
  if (assignment.size() != instances) {
    throw ConfigError("placement assigns " + std::to_string(assignment.size()) +
                      " instances, app has " + std::to_string(instances));
  }
  if (!platform.has_external() &&
      (count(Device::External) > 0 || hh_location == Device::External)) {
    throw ConfigError("placement uses an external device but platform '" +
                      platform.name + "' has none");
  }
}

namespace {

// Knuth's selection sampling: keeps exactly `need` of the next `total`
// items, each subset equally likely.
class SelectionSampler {
 public:
  SelectionSampler(std::uint64_t need, std::uint64_t total) : need_(need), left_(total) {}

  bool keep(std::mt19937_64& rng) {
    if (left_ == 0) return false;
    bool take;
    if (need_ == left_) {
      take = true;
    } else if (need_ == 0) {
      take = false;
    } else {
      take = rng() % left_ < need_;
    }
    --left_;
    if (take) --need_;
    return take;
  }

 private:
  std::uint64_t need_;
  std::uint64_t left_;
};

std::uint64_t capped(double capacity, std::uint64_t offered) {
  if (!(capacity < static_cast<double>(offered))) return offered;
  return capacity <= 0 ? 0 : static_cast<std::uint64_t>(std::floor(capacity));
}

}  // namespace

Simulation::Simulation(const AppRequirements& app, Platform platform,
                       PlacementPlan placement, SimConfig config)
    : app_(app),
      platform_(std::move(platform)),
      placement_(std::move(placement)),
      config_(config),
      monitor_(app.schemes, app.configs, app.hh_k, config.weight_mode) {
  platform_.validate();
  placement_.validate(platform_, app_.configs.size());
  if (config_.epoch_us == 0) throw ConfigError("epoch_us must be positive");
  if (!(config_.message_bytes() > 0)) throw ConfigError("update messages must carry bytes");
}

SimulationReport Simulation::run(const Trace& trace) {
  if (trace.empty()) throw ConfigError("cannot simulate an empty trace");

  const double epoch_s = static_cast<double>(config_.epoch_us) / 1e6;
  const double msg_bytes = config_.message_bytes();

  std::uint64_t rows_ext = 0;
  std::uint64_t rows_asic = 0;
  for (std::size_t i = 0; i < app_.configs.size(); ++i) {
    (placement_.assignment[i] == Device::External ? rows_ext : rows_asic) +=
        app_.configs[i].rows;
  }

  double link_Bps = 0;
  double link_latency = 0;
  double device_updates_per_s = 0;
  if (platform_.has_external()) {
    link_Bps = platform_.interconnect->effective_bandwidth_Bps();
    link_latency = platform_.interconnect->latency_s;
    device_updates_per_s =
        device_capacity(*platform_.external, config_.counter_bytes, config_.rw_ops)
            .updates_per_s;
  }
  const double link_updates_per_epoch = link_Bps * epoch_s / msg_bytes;
  const double device_updates_per_epoch = device_updates_per_s * epoch_s;
  const double ext_capacity = std::min(link_updates_per_epoch, device_updates_per_epoch);
  const double asic_packets_per_epoch = platform_.asic.pps_capacity * epoch_s;

  SimulationReport report;
  report.platform = platform_.name;
  std::mt19937_64 rng(config_.seed);

  const auto& records = trace.records();
  const std::uint64_t t0 = records.front().ts_us;
  const std::uint64_t epoch_count = trace.duration_us() / config_.epoch_us + 1;
  report.epochs.reserve(epoch_count);

  double latency_weighted = 0;
  std::size_t cursor = 0;
  for (std::uint64_t e = 0; e < epoch_count; ++e) {
    const std::uint64_t end_ts = t0 + (e + 1) * config_.epoch_us;
    std::size_t last = cursor;
    while (last < records.size() && records[last].ts_us < end_ts) ++last;

    EpochReport ep;
    ep.index = e;
    ep.packets = last - cursor;
    ep.external_offered_updates = ep.packets * rows_ext;
    const std::uint64_t asic_offered = ep.packets * rows_asic;
    ep.offered_updates = ep.external_offered_updates + asic_offered;

    ep.external_served_updates = capped(ext_capacity, ep.external_offered_updates);
    const std::uint64_t asic_served =
        capped(asic_packets_per_epoch * static_cast<double>(rows_asic), asic_offered);
    ep.served_updates = ep.external_served_updates + asic_served;
    ep.dropped_updates = ep.offered_updates - ep.served_updates;

    SelectionSampler ext_lane(ep.external_served_updates, ep.external_offered_updates);
    SelectionSampler asic_lane(asic_served, asic_offered);
    const auto& assignment = placement_.assignment;
    for (std::size_t p = cursor; p < last; ++p) {
      const UpdateStats s =
          monitor_.update_filtered(records[p], [&](std::size_t inst, std::size_t) {
            return assignment[inst] == Device::External ? ext_lane.keep(rng)
                                                        : asic_lane.keep(rng);
          });
      report.totals.hh_accepted += s.hh_accepted;
      report.totals.hh_refreshed += s.hh_refreshed;
    }
    cursor = last;

    ep.interconnect_bytes = static_cast<double>(ep.external_served_updates) * msg_bytes;
    if (link_Bps > 0) {
      ep.interconnect_utilization = ep.interconnect_bytes / (link_Bps * epoch_s);
    }
    if (device_updates_per_epoch > 0) {
      ep.device_utilization =
          static_cast<double>(ep.external_served_updates) / device_updates_per_epoch;
    }

    double weighted = 0;
    if (ep.external_served_updates > 0) {
      const double rho =
          std::min(std::max(ep.interconnect_utilization, ep.device_utilization), 0.99);
      const double latency = link_latency + msg_bytes / link_Bps +
                             config_.latency_base_s / (1.0 - rho);
      weighted += latency * static_cast<double>(ep.external_served_updates);
    }
    if (asic_served > 0) {
      const double served_packets = static_cast<double>(asic_served) /
                                    static_cast<double>(rows_asic);
      const double rho = std::min(served_packets / asic_packets_per_epoch, 0.99);
      weighted += config_.latency_base_s / (1.0 - rho) * static_cast<double>(asic_served);
    }
    if (ep.served_updates > 0) {
      ep.mean_update_latency_s = weighted / static_cast<double>(ep.served_updates);
    }
    latency_weighted += weighted;

    SimulationTotals& t = report.totals;
    t.packets += ep.packets;
    t.offered_updates += ep.offered_updates;
    t.served_updates += ep.served_updates;
    t.dropped_updates += ep.dropped_updates;
    t.external_offered_updates += ep.external_offered_updates;
    t.external_served_updates += ep.external_served_updates;
    t.interconnect_bytes += ep.interconnect_bytes;
    report.epochs.push_back(ep);
  }

  SimulationTotals& t = report.totals;
  t.duration_s = static_cast<double>(trace.duration_us()) / 1e6;
  const double span_s = t.duration_s > 0 ? t.duration_s : epoch_s;
  t.demand_bandwidth_Bps = static_cast<double>(t.external_offered_updates) * msg_bytes / span_s;
  if (t.served_updates > 0) {
    t.mean_update_latency_s = latency_weighted / static_cast<double>(t.served_updates);
  }

  for (std::size_t i = 0; i < monitor_.dimension(); ++i) {
    const MonitorSlot& slot = monitor_.slot(i);
    InstanceAccuracy acc = measure_accuracy(slot, oracle_counts(trace, slot.scheme));
    acc.instance_id = i;
    report.accuracy.push_back(acc);
    report.saturation_events += slot.sketch.saturation_events();
  }
  return report;
}

SimulationReport simulate(const Trace& trace, const Platform& platform,
                          const PlacementPlan& placement, const AppRequirements& app,
                          const SimConfig& config) {
  Simulation sim(app, platform, placement, config);
  return sim.run(trace);
}

OracleCounts oracle_counts(const Trace& trace, const FlowKeyScheme& scheme) {
  OracleCounts counts;
  for (const PacketRecord& r : trace) ++counts[extract_key(r, scheme)];
  return counts;
}

std::vector<std::pair<FlowKey, std::uint64_t>> true_top_k(const OracleCounts& counts,
                                                          std::size_t k) {
  std::vector<std::pair<FlowKey, std::uint64_t>> all(counts.begin(), counts.end());
  auto by_count = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(n), all.end(), by_count);
  all.resize(n);
  return all;
}

InstanceAccuracy measure_accuracy(const MonitorSlot& slot, const OracleCounts& counts) {
  InstanceAccuracy acc;
  acc.scheme = slot.scheme.describe();
  const auto top = true_top_k(counts, slot.tracker.capacity());
  acc.true_top_keys = top.size();

  std::size_t hits = 0;
  double err = 0;
  for (const auto& [key, truth] : top) {
    const double est = static_cast<double>(slot.sketch.query(key));
    err += std::abs(est - static_cast<double>(truth)) / static_cast<double>(truth);
    if (slot.tracker.contains(key)) ++hits;
  }
  if (!top.empty()) {
    acc.mean_relative_error = err / static_cast<double>(top.size());
    acc.hh_recall = static_cast<double>(hits) / static_cast<double>(top.size());
  }
  if (slot.tracker.size() > 0) {
    acc.hh_precision = static_cast<double>(hits) / static_cast<double>(slot.tracker.size());
  }
  return acc;
}

json to_json(const SimulationReport& r) {
  json epochs = json::array();
  for (const EpochReport& e : r.epochs) {
    epochs.push_back({
        {"index", e.index},
        {"packets", e.packets},
        {"offered_updates", e.offered_updates},
        {"served_updates", e.served_updates},
        {"dropped_updates", e.dropped_updates},
        {"external_offered_updates", e.external_offered_updates},
        {"external_served_updates", e.external_served_updates},
        {"interconnect_bytes", e.interconnect_bytes},
        {"interconnect_utilization", e.interconnect_utilization},
        {"device_utilization", e.device_utilization},
        {"mean_update_latency_s", e.mean_update_latency_s},
    });
  }
  json accuracy = json::array();
  for (const InstanceAccuracy& a : r.accuracy) {
    accuracy.push_back({
        {"instance_id", a.instance_id},
        {"scheme", a.scheme},
        {"true_top_keys", a.true_top_keys},
        {"mean_relative_error", a.mean_relative_error},
        {"hh_recall", a.hh_recall},
        {"hh_precision", a.hh_precision},
    });
  }
  const SimulationTotals& t = r.totals;
  return {
      {"platform", r.platform},
      {"epochs", epochs},
      {"totals",
       {
           {"packets", t.packets},
           {"offered_updates", t.offered_updates},
           {"served_updates", t.served_updates},
           {"dropped_updates", t.dropped_updates},
           {"external_offered_updates", t.external_offered_updates},
           {"external_served_updates", t.external_served_updates},
           {"interconnect_bytes", t.interconnect_bytes},
           {"duration_s", t.duration_s},
           {"demand_bandwidth_Bps", t.demand_bandwidth_Bps},
           {"mean_update_latency_s", t.mean_update_latency_s},
           {"hh_accepted", t.hh_accepted},
           {"hh_refreshed", t.hh_refreshed},
       }},
      {"accuracy", accuracy},
      {"saturation_events", r.saturation_events},
  };
}

void print_report(std::ostream& out, const SimulationReport& r) {
  const SimulationTotals& t = r.totals;
  const double served_frac =
      t.offered_updates ? static_cast<double>(t.served_updates) / t.offered_updates : 1.0;
  std::ostringstream s;
  s << "platform            " << r.platform << '\n'
    << "packets             " << t.packets << '\n'
    << "duration_s          " << t.duration_s << '\n'
    << "offered_updates     " << t.offered_updates << '\n'
    << "served_updates      " << t.served_updates << '\n'
    << "dropped_updates     " << t.dropped_updates << '\n'
    << "served_fraction     " << std::setprecision(6) << served_frac << '\n'
    << "demand_bandwidth    " << t.demand_bandwidth_Bps << " B/s\n"
    << "mean_latency        " << t.mean_update_latency_s << " s\n"
    << "hh_accepted         " << t.hh_accepted << '\n'
    << "saturation_events   " << r.saturation_events << "\n\n";

  s << std::left << std::setw(6) << "inst" << std::setw(40) << "flow key" << std::right
    << std::setw(9) << "top_keys" << ' ' << std::setw(12) << "mean_rel_err" << std::setw(9)
    << "recall" << std::setw(11) << "precision" << '\n';
  for (const InstanceAccuracy& a : r.accuracy) {
    s << std::left << std::setw(6) << a.instance_id << std::setw(40) << a.scheme
      << std::right << std::setw(9) << a.true_top_keys << ' ' << std::setw(12) << std::fixed
      << std::setprecision(4) << a.mean_relative_error << std::setw(9) << a.hh_recall
      << std::setw(11) << a.hh_precision << '\n'
      << std::defaultfloat;
  }
  out << s.str();
}

}  // namespace xplane
