#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplane/app.hpp"
#include "xplane/catalog.hpp"
#include "xplane/ilp.hpp"
#include "xplane/platform.hpp"
#include "xplane/simulator.hpp"

namespace xplane {

enum class Objective : std::uint8_t { MinCost, MaxBandwidthHeadroom };
std::string_view to_string(Objective o) noexcept;
Objective parse_objective(std::string_view name);

struct OperatorInputs {
  double traffic_pps = 1.43e6;
  double latency_budget_s = 1e-3;
  double cost_budget_usd = 1e6;
  Objective objective = Objective::MinCost;

  void validate() const;
};

// Per-platform variable handles inside a provisioning model.
struct PlatformVars {
  std::string name;
  std::size_t select = 0;  // y_p
  // [instance][device]; nullopt when the platform has no such device.
  std::vector<std::array<std::optional<std::size_t>, 2>> place;
};

struct ProvisionModel {
  IlpModel ilp;
  std::vector<PlatformVars> platforms;  // in candidate order
  std::vector<Platform> candidates;
  std::size_t instances = 0;
  std::vector<SketchConfig> configs;
  std::vector<std::string> warnings;
};

// Constraint families, in diagnostic order. "single_platform" and
// "assignment" are structural; the rest encode resource limits.
const std::vector<std::string>& constraint_families();

ProvisionModel build_model(const OperatorInputs& inputs, const AppRequirements& app,
                           const std::vector<Platform>& candidates);

struct ProvisionResult {
  bool feasible = false;
  std::optional<std::string> chosen_platform;
  std::optional<PlacementPlan> placement;
  std::optional<double> objective_value;
  // Feasible: labels of tight constraints. Infeasible: the first family
  // infeasible on its own, else the first infeasible pair "a+b", else
  // "combined".
  std::vector<std::string> binding_constraints;
  std::vector<std::string> warnings;
  BranchAndBoundStats search;
};

// Decodes a complete assignment into (platform index, placement).
std::pair<std::size_t, PlacementPlan> decode(const ProvisionModel& model,
                                             const std::vector<std::uint8_t>& x);

// Orders equal-cost solutions by platform label, then placement
// (asic < external, instance by instance).
bool prefer(const ProvisionModel& model, const std::vector<std::uint8_t>& a,
            const std::vector<std::uint8_t>& b);

ProvisionResult solve(const ProvisionModel& model);

nlohmann::json to_json(const ProvisionResult& result);
void print_result(std::ostream& out, const ProvisionResult& result);

// --- what-if -------------------------------------------------------------

// Everything a provisioning run reads, as one document:
//   {"inputs": {...}, "app": {...}, "catalog": {...}}
// Overrides address it by dotted path, e.g. "inputs.traffic_pps".
nlohmann::json make_scenario(const OperatorInputs& inputs, const AppRequirements& app,
                             const Catalog& catalog);
nlohmann::json to_json(const OperatorInputs& inputs);
OperatorInputs inputs_from_json(const nlohmann::json& doc);
ProvisionResult provision(const nlohmann::json& scenario);

struct WhatIfReport {
  std::vector<std::string> overrides;
  ProvisionResult base;
  ProvisionResult variant;
  std::vector<std::string> changed_decisions;
  std::optional<double> objective_delta;
};

// Applies "path=value" at the scenario root; a path that only exists inside
// platforms ("interconnect.bandwidth_Bps") is applied to every catalog
// platform that has it.
void apply_scenario_override(nlohmann::json& scenario, std::string_view assignment);

WhatIfReport what_if(const nlohmann::json& scenario, const std::vector<std::string>& overrides);

nlohmann::json to_json(const WhatIfReport& report);
void print_what_if(std::ostream& out, const WhatIfReport& report);

// --- partition -------------------------------------------------------------

struct ManifestEntry {
  std::size_t instance_id = 0;
  SketchConfig config;
  std::vector<FlowField> key_fields;
};

struct PartitionManifest {
  std::vector<ManifestEntry> switch_part;
  std::vector<ManifestEntry> external_part;
  Device hh_location = Device::Asic;

  PlacementPlan placement(std::size_t instances) const;
};

inline constexpr int kManifestVersion = 1;

// Packs instances onto the switch in decreasing footprint order while the
// pipeline fit stays feasible and sends the rest to the external device.
// Throws InfeasibleError naming the binding resource when the platform
// cannot host the app.
PartitionManifest partition(const AppRequirements& app, const Platform& platform,
                            const OperatorInputs& inputs = {});

nlohmann::json to_json(const PartitionManifest& manifest);
// Empty when `doc` is a well-formed manifest; otherwise one message per
// problem.
std::vector<std::string> validate_manifest(const nlohmann::json& doc);

}  // namespace xplane
