#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplane/app.hpp"
#include "xplane/monitor.hpp"
#include "xplane/platform.hpp"
#include "xplane/workload.hpp"

namespace xplane {

enum class Device : std::uint8_t { Asic, External };

std::string_view to_string(Device d) noexcept;
Device parse_device(std::string_view name);

struct PlacementPlan {
  // Device of every instance, indexed by instance id.
  std::vector<Device> assignment;
  Device hh_location = Device::Asic;

  static PlacementPlan all(std::size_t instances, Device d);
  std::size_t count(Device d) const noexcept;
  // Throws ConfigError when the plan does not cover exactly `instances`
  // instances or uses an external device the platform lacks.
  void validate(const Platform& platform, std::size_t instances) const;

  friend bool operator==(const PlacementPlan&, const PlacementPlan&) = default;
};

struct SimConfig {
  std::uint64_t epoch_us = 10'000;
  // Service time of an idle device; inflated by 1/(1 - utilization).
  double latency_base_s = 100e-9;
  std::uint64_t seed = 1;
  WeightMode weight_mode = WeightMode::Packets;
  double counter_bytes = kDefaultCounterBytes;
  double rw_ops = kDefaultRwOps;

  double message_bytes() const noexcept { return counter_bytes * rw_ops; }
};

struct EpochReport {
  std::uint64_t index = 0;
  std::uint64_t packets = 0;
  std::uint64_t offered_updates = 0;
  std::uint64_t served_updates = 0;
  std::uint64_t dropped_updates = 0;
  std::uint64_t external_offered_updates = 0;
  std::uint64_t external_served_updates = 0;
  double interconnect_bytes = 0;
  // Post-drop, so never above 1.
  double interconnect_utilization = 0;
  double device_utilization = 0;
  double mean_update_latency_s = 0;
};

struct InstanceAccuracy {
  std::size_t instance_id = 0;
  std::string scheme;
  std::size_t true_top_keys = 0;
  double mean_relative_error = 0;
  double hh_recall = 0;
  double hh_precision = 0;
};

struct SimulationTotals {
  std::uint64_t packets = 0;
  std::uint64_t offered_updates = 0;
  std::uint64_t served_updates = 0;
  std::uint64_t dropped_updates = 0;
  std::uint64_t external_offered_updates = 0;
  std::uint64_t external_served_updates = 0;
  double interconnect_bytes = 0;
  double duration_s = 0;
  // Offered external update bytes per second of trace.
  double demand_bandwidth_Bps = 0;
  double mean_update_latency_s = 0;
  std::uint64_t hh_accepted = 0;
  std::uint64_t hh_refreshed = 0;
};

struct SimulationReport {
  std::string platform;
  std::vector<EpochReport> epochs;
  SimulationTotals totals;
  std::vector<InstanceAccuracy> accuracy;
  std::uint64_t saturation_events = 0;
};

// Epoch-level fluid simulation of an application deployed on a platform.
// Update messages for externally placed instances share the lesser of the
// interconnect and device capacities; the excess is dropped uniformly at
// random (seeded) and never reaches the sketch.
class Simulation {
 public:
  Simulation(const AppRequirements& app, Platform platform, PlacementPlan placement,
             SimConfig config);

  // Throws ConfigError on an empty trace.
  SimulationReport run(const Trace& trace);

  const MultiDimMonitor& monitor() const noexcept { return monitor_; }

 private:
  AppRequirements app_;
  Platform platform_;
  PlacementPlan placement_;
  SimConfig config_;
  MultiDimMonitor monitor_;
};

SimulationReport simulate(const Trace& trace, const Platform& platform,
                          const PlacementPlan& placement, const AppRequirements& app,
                          const SimConfig& config);

using OracleCounts = std::unordered_map<FlowKey, std::uint64_t, FlowKeyHash>;

// Exact per-key packet counts.
OracleCounts oracle_counts(const Trace& trace, const FlowKeyScheme& scheme);

// The `k` largest keys by exact count, ties broken by key order.
std::vector<std::pair<FlowKey, std::uint64_t>> true_top_k(const OracleCounts& counts,
                                                          std::size_t k);

InstanceAccuracy measure_accuracy(const MonitorSlot& slot, const OracleCounts& counts);

nlohmann::json to_json(const SimulationReport& report);
void print_report(std::ostream& out, const SimulationReport& report);

}  // namespace xplane
