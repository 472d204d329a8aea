#include "xplane/provisioner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "xplane/error.hpp"

namespace xplane {

using nlohmann::json;

std::string_view to_string(Objective o) noexcept {
  return o == Objective::MinCost ? "MinCost" : "MaxBandwidthHeadroom";
}

Objective parse_objective(std::string_view name) {
  if (name == "MinCost" || name == "min-cost") return Objective::MinCost;
  if (name == "MaxBandwidthHeadroom" || name == "max-headroom") {
    return Objective::MaxBandwidthHeadroom;
  }
  throw ConfigError("unknown objective '" + std::string(name) + "'");
}

void OperatorInputs::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
  };
  positive(traffic_pps, "inputs.traffic_pps");
  positive(latency_budget_s, "inputs.latency_budget_s");
  positive(cost_budget_usd, "inputs.cost_budget_usd");
}

const std::vector<std::string>& constraint_families() {
  static const std::vector<std::string> families = {
      "single_platform",       "assignment",        "cost_budget",
      "capability",            "asic_pps",          "asic_stages",
      "asic_row_sram",         "asic_stage_slots",  "asic_sram",
      "asic_hash_units",       "asic_stateful_alus", "ext_memory",
      "ext_scratchpad",        "interconnect_bandwidth", "device_update_capacity",
      "latency_budget",        "fpga_dsp",
  };
  return families;
}

namespace {

bool structural(const std::string& family) {
  return family == "single_platform" || family == "assignment";
}

constexpr std::size_t kAsic = 0;
constexpr std::size_t kExternal = 1;

double update_latency_s(const InterconnectModel& link, double msg_bytes) {
  return link.latency_s + msg_bytes / link.effective_bandwidth_Bps() + SimConfig{}.latency_base_s;
}

}  // namespace

ProvisionModel build_model(const OperatorInputs& inputs, const AppRequirements& app,
                           const std::vector<Platform>& candidates) {
  inputs.validate();
  app.validate();
  if (candidates.empty()) throw ConfigError("no candidate platforms");

  ProvisionModel m;
  m.candidates = candidates;
  m.instances = app.configs.size();
  m.configs = app.configs;
  IlpModel& ilp = m.ilp;
  const DemandParams params{.hh_k = app.hh_k};
  const double pps = inputs.traffic_pps;
  const double msg = params.message_bytes();
  const double hh_bytes =
      static_cast<double>(hh_footprint(app.hh_k, params.hh_key_bytes, params.hh_counter_bytes,
                                       params.hh_slots)) *
      static_cast<double>(m.instances);
  const double hh_bw = hh_bandwidth(pps, params.hh_bytes_per_access);

  std::set<std::string> names;
  for (const Platform& p : candidates) {
    p.validate();
    if (!names.insert(p.name).second) {
      throw ConfigError("duplicate candidate platform '" + p.name + "'");
    }
    PlatformVars vars;
    vars.name = p.name;
    vars.select = ilp.add_variable("y[" + p.name + "]");
    for (std::size_t i = 0; i < m.instances; ++i) {
      std::array<std::optional<std::size_t>, 2> slot;
      const std::string base = "x[" + p.name + "][" + std::to_string(i) + "]";
      slot[kAsic] = ilp.add_variable(base + "[asic]");
      if (p.has_external()) slot[kExternal] = ilp.add_variable(base + "[external]");
      vars.place.push_back(slot);
    }
    m.platforms.push_back(std::move(vars));
  }

  auto add = [&](std::string label, std::string family, std::vector<Term> terms, Sense sense,
                 double rhs) {
    ilp.add_constraint({std::move(label), std::move(family), std::move(terms), sense, rhs});
  };

  {
    std::vector<Term> terms;
    for (const PlatformVars& v : m.platforms) terms.push_back({v.select, 1.0});
    add("single_platform", "single_platform", std::move(terms), Sense::Equal, 1.0);
  }
  {
    std::vector<Term> terms;
    for (std::size_t p = 0; p < candidates.size(); ++p) {
      terms.push_back({m.platforms[p].select, candidates[p].cost_usd()});
    }
    add("cost_budget", "cost_budget", std::move(terms), Sense::LessEqual,
        inputs.cost_budget_usd);
  }

  std::vector<Term> objective;
  for (std::size_t p = 0; p < candidates.size(); ++p) {
    const Platform& plat = candidates[p];
    const PlatformVars& v = m.platforms[p];
    const std::string tag = "[" + plat.name + "]";
    const AsicModel& asic = plat.asic;

    for (std::size_t i = 0; i < m.instances; ++i) {
      std::vector<Term> terms;
      for (const auto& d : v.place[i]) {
        if (d) terms.push_back({*d, 1.0});
      }
      terms.push_back({v.select, -1.0});
      add("assignment" + tag + "[" + std::to_string(i) + "]", "assignment", std::move(terms),
          Sense::Equal, 0.0);
    }

    for (Capability cap : app.required_capabilities) {
      if (!plat.supports(cap)) {
        add("capability" + tag + "[" + std::string(to_string(cap)) + "]", "capability",
            {{v.select, 1.0}}, Sense::LessEqual, 0.0);
      }
    }
    add("asic_pps" + tag, "asic_pps", {{v.select, pps}}, Sense::LessEqual, asic.pps_capacity);

    std::vector<Term> slots, sram, hash, alus;
    for (std::size_t i = 0; i < m.instances; ++i) {
      const SketchConfig& c = app.configs[i];
      const std::size_t x = *v.place[i][kAsic];
      const std::string it = tag + "[" + std::to_string(i) + "]";
      add("asic_stages" + it, "asic_stages", {{x, static_cast<double>(c.rows)}},
          Sense::LessEqual, static_cast<double>(asic.stages));
      add("asic_row_sram" + it, "asic_row_sram", {{x, static_cast<double>(c.row_bits())}},
          Sense::LessEqual, asic.sram_bits_per_stage);
      if (const std::uint32_t per_stage = rows_per_stage(c, asic); per_stage > 0) {
        slots.push_back({x, static_cast<double>(c.rows) / per_stage});
      }
      sram.push_back({x, static_cast<double>(c.footprint_bits())});
      hash.push_back({x, static_cast<double>(c.rows)});
      alus.push_back({x, static_cast<double>(c.rows)});
    }
    const double stages = asic.stages;
    add("asic_stage_slots" + tag, "asic_stage_slots", std::move(slots), Sense::LessEqual, stages);
    add("asic_sram" + tag, "asic_sram", std::move(sram), Sense::LessEqual,
        stages * asic.sram_bits_per_stage);
    add("asic_hash_units" + tag, "asic_hash_units", std::move(hash), Sense::LessEqual,
        stages * asic.hash_units_per_stage);
    add("asic_stateful_alus" + tag, "asic_stateful_alus", std::move(alus), Sense::LessEqual,
        stages * asic.stateful_alus_per_stage);

    if (inputs.objective == Objective::MinCost) {
      objective.push_back({v.select, plat.cost_usd()});
    }

    if (!plat.has_external()) continue;

    const ExternalDevice& dev = *plat.external;
    const InterconnectModel& link = *plat.interconnect;
    const CapacityProfile cap = device_capacity(dev, params.counter_bytes, params.rw_ops);
    const bool is_fpga = std::holds_alternative<FpgaModel>(dev);

    std::vector<Term> mem, bw, upd, dsp;
    for (std::size_t i = 0; i < m.instances; ++i) {
      const SketchConfig& c = app.configs[i];
      const std::size_t x = *v.place[i][kExternal];
      const double rate = static_cast<double>(c.rows) * pps;
      mem.push_back({x, static_cast<double>(c.footprint_bits())});
      bw.push_back({x, rate * msg});
      upd.push_back({x, rate});
      if (is_fpga) {
        dsp.push_back({x, c.rows * std::get<FpgaModel>(dev).dsp_fraction_per_hash_engine});
      }
      add("latency_budget" + tag + "[" + std::to_string(i) + "]", "latency_budget",
          {{x, update_latency_s(link, msg)}}, Sense::LessEqual, inputs.latency_budget_s);
      if (inputs.objective == Objective::MaxBandwidthHeadroom) {
        objective.push_back({x, -rate * msg});
      }
    }
    // The heavy-hitter queues live on the external device: PIM keeps them in
    // its scratchpad, an FPGA in on-chip memory.
    if (is_fpga) {
      mem.push_back({v.select, hh_bytes * 8.0});
    } else {
      add("ext_scratchpad" + tag, "ext_scratchpad", {{v.select, hh_bytes}}, Sense::LessEqual,
          std::get<PimModel>(dev).scratchpad_bytes);
    }
    bw.push_back({v.select, hh_bw});
    add("ext_memory" + tag, "ext_memory", std::move(mem), Sense::LessEqual, cap.mem_bits);
    add("interconnect_bandwidth" + tag, "interconnect_bandwidth", std::move(bw),
        Sense::LessEqual, link.effective_bandwidth_Bps());
    add("device_update_capacity" + tag, "device_update_capacity", std::move(upd),
        Sense::LessEqual, cap.updates_per_s);
    if (is_fpga) add("fpga_dsp" + tag, "fpga_dsp", std::move(dsp), Sense::LessEqual, 1.0);

    if (inputs.objective == Objective::MaxBandwidthHeadroom) {
      const double path = std::min(link.effective_bandwidth_Bps(), cap.updates_per_s * msg);
      objective.push_back({v.select, path - hh_bw});
    }
  }
  ilp.set_objective(std::move(objective),
                    inputs.objective == Objective::MaxBandwidthHeadroom);

  // Warn about candidates that cannot host even a single instance.
  for (std::size_t p = 0; p < candidates.size(); ++p) {
    const PlatformVars& v = m.platforms[p];
    bool any = false;
    std::string blocker;
    for (std::size_t i = 0; i < m.instances && !any; ++i) {
      for (const auto& d : v.place[i]) {
        if (!d) continue;
        std::vector<std::uint8_t> x(ilp.variable_count(), 0);
        x[v.select] = 1;
        x[*d] = 1;
        bool ok = true;
        for (const Constraint& c : ilp.constraints()) {
          if (!structural(c.family) && !c.satisfied(x)) {
            if (blocker.empty()) blocker = c.family;
            ok = false;
            break;
          }
        }
        if (ok) {
          any = true;
          break;
        }
      }
    }
    if (!any) {
      m.warnings.push_back("platform '" + v.name +
                           "' cannot host any instance (" + blocker + ")");
    }
  }
  return m;
}

std::pair<std::size_t, PlacementPlan> decode(const ProvisionModel& model,
                                             const std::vector<std::uint8_t>& x) {
  for (std::size_t p = 0; p < model.platforms.size(); ++p) {
    const PlatformVars& v = model.platforms[p];
    if (!x[v.select]) continue;
    const bool ext = model.candidates[p].has_external();
    PlacementPlan plan;
    plan.hh_location = ext ? Device::External : Device::Asic;
    for (const auto& slot : v.place) {
      plan.assignment.push_back(x[*slot[kAsic]] ? Device::Asic : Device::External);
    }
    return {p, plan};
  }
  throw std::logic_error("assignment selects no platform");
}

bool prefer(const ProvisionModel& model, const std::vector<std::uint8_t>& a,
            const std::vector<std::uint8_t>& b) {
  const auto [pa, plan_a] = decode(model, a);
  const auto [pb, plan_b] = decode(model, b);
  const std::string& na = model.platforms[pa].name;
  const std::string& nb = model.platforms[pb].name;
  if (na != nb) return na < nb;
  return plan_a.assignment < plan_b.assignment;
}

ProvisionResult solve(const ProvisionModel& model) {
  ProvisionResult result;
  result.warnings = model.warnings;
  const TieBreak tie = [&](const auto& a, const auto& b) { return prefer(model, a, b); };
  const auto best = branch_and_bound(model.ilp, tie, &result.search);

  if (!best) {
    // Name the first family that is infeasible on its own, else the first
    // infeasible pair ("a+b").
    std::vector<std::string> families;
    for (const std::string& f : constraint_families()) {
      if (!structural(f)) families.push_back(f);
    }
    auto infeasible_with = [&](const std::string& a, const std::string& b) {
      return !branch_and_bound(model.ilp.restricted(
          [&](const std::string& f) { return structural(f) || f == a || f == b; }));
    };
    for (const std::string& f : families) {
      if (infeasible_with(f, f)) {
        result.binding_constraints.push_back(f);
        return result;
      }
    }
    for (std::size_t i = 0; i < families.size(); ++i) {
      for (std::size_t j = i + 1; j < families.size(); ++j) {
        if (infeasible_with(families[i], families[j])) {
          result.binding_constraints.push_back(families[i] + "+" + families[j]);
          return result;
        }
      }
    }
    result.binding_constraints.push_back("combined");
    return result;
  }

  const std::vector<std::uint8_t>& x = *best;
  auto [p, plan] = decode(model, x);
  result.feasible = true;
  result.chosen_platform = model.platforms[p].name;
  result.objective_value = model.ilp.objective_value(x);

  for (const Constraint& c : model.ilp.constraints()) {
    if (structural(c.family) || c.sense != Sense::LessEqual) continue;
    const bool active = std::any_of(c.terms.begin(), c.terms.end(),
                                    [&](const Term& t) { return x[t.var] && t.coef != 0; });
    if (active && c.lhs(x) >= c.rhs - constraint_tolerance(c.rhs)) {
      result.binding_constraints.push_back(c.label);
    }
  }

  // The pipeline constraints are a linear relaxation of the stage packing;
  // flag placements the packer cannot realize.
  std::vector<SketchConfig> on_switch;
  for (std::size_t i = 0; i < model.instances; ++i) {
    if (plan.assignment[i] == Device::Asic) on_switch.push_back(model.configs[i]);
  }
  if (!asic_fit(on_switch, model.candidates[p].asic).feasible) {
    result.warnings.push_back("switch placement passes the linear pipeline constraints "
                              "but not the stage packer");
  }
  result.placement = std::move(plan);
  return result;
}

namespace {

json result_json(const ProvisionResult& r) {
  json out = {
      {"feasible", r.feasible},
      {"binding_constraints", r.binding_constraints},
      {"warnings", r.warnings},
      {"search",
       {{"nodes", r.search.nodes},
        {"leaves", r.search.leaves},
        {"pruned_infeasible", r.search.pruned_infeasible},
        {"pruned_bound", r.search.pruned_bound}}},
  };
  if (r.feasible) {
    json assignment = json::array();
    for (Device d : r.placement->assignment) assignment.push_back(to_string(d));
    out["chosen_platform"] = *r.chosen_platform;
    out["objective_value"] = *r.objective_value;
    out["placement"] = {{"assignment", assignment},
                        {"hh_location", to_string(r.placement->hh_location)}};
  }
  return out;
}

}  // namespace

json to_json(const ProvisionResult& result) { return result_json(result); }

void print_result(std::ostream& out, const ProvisionResult& r) {
  std::ostringstream s;
  s << "feasible            " << (r.feasible ? "yes" : "no") << '\n';
  if (r.feasible) {
    s << "chosen_platform     " << *r.chosen_platform << '\n'
      << "objective_value     " << std::setprecision(10) << *r.objective_value << '\n'
      << "placement           ";
    for (std::size_t i = 0; i < r.placement->assignment.size(); ++i) {
      s << (i ? " " : "") << i << ':' << to_string(r.placement->assignment[i]);
    }
    s << "\nhh_location         " << to_string(r.placement->hh_location) << '\n';
  }
  s << "binding_constraints";
  if (r.binding_constraints.empty()) s << " -";
  for (const std::string& c : r.binding_constraints) s << "\n  " << c;
  s << '\n';
  for (const std::string& w : r.warnings) s << "warning: " << w << '\n';
  out << s.str();
}

json to_json(const OperatorInputs& in) {
  return {{"traffic_pps", in.traffic_pps},
          {"latency_budget_s", in.latency_budget_s},
          {"cost_budget_usd", in.cost_budget_usd},
          {"objective", to_string(in.objective)}};
}

OperatorInputs inputs_from_json(const json& doc) {
  detail::ObjectReader r(doc, "inputs");
  OperatorInputs in;
  r.read("traffic_pps", in.traffic_pps);
  r.read("latency_budget_s", in.latency_budget_s);
  r.read("cost_budget_usd", in.cost_budget_usd);
  std::string objective(to_string(in.objective));
  r.read("objective", objective);
  in.objective = parse_objective(objective);
  r.finish();
  in.validate();
  return in;
}

json make_scenario(const OperatorInputs& inputs, const AppRequirements& app,
                   const Catalog& catalog) {
  return {{"inputs", to_json(inputs)}, {"app", to_json(app)}, {"catalog", to_json(catalog)}};
}

ProvisionResult provision(const json& scenario) {
  detail::ObjectReader r(scenario, "scenario");
  const OperatorInputs inputs = inputs_from_json(r.at("inputs"));
  const AppRequirements app = app_from_json(r.at("app"));
  const Catalog catalog = catalog_from_json(r.at("catalog"));
  r.finish();
  return solve(build_model(inputs, app, catalog.candidates()));
}

void apply_scenario_override(json& scenario, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || find_path(scenario, assignment.substr(0, eq))) {
    apply_override(scenario, assignment);
    return;
  }
  const std::string_view path = assignment.substr(0, eq);
  bool applied = false;
  if (json* platforms = find_path(scenario, "catalog.platforms"); platforms && platforms->is_object()) {
    for (auto& [name, platform] : platforms->items()) {
      if (find_path(platform, path)) {
        apply_override(platform, assignment);
        applied = true;
      }
    }
  }
  if (!applied) throw ConfigError("unknown field '" + std::string(path) + "'");
}

WhatIfReport what_if(const json& scenario, const std::vector<std::string>& overrides) {
  WhatIfReport report;
  report.overrides = overrides;
  json variant = scenario;
  for (const std::string& o : overrides) apply_scenario_override(variant, o);

  report.base = provision(scenario);
  report.variant = provision(variant);

  const ProvisionResult& a = report.base;
  const ProvisionResult& b = report.variant;
  auto describe = [](const ProvisionResult& r) {
    return r.feasible ? *r.chosen_platform : std::string("infeasible");
  };
  if (describe(a) != describe(b)) {
    report.changed_decisions.push_back("platform: " + describe(a) + " -> " + describe(b));
  }
  if (a.feasible && b.feasible) {
    const auto& pa = a.placement->assignment;
    const auto& pb = b.placement->assignment;
    for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
      if (pa[i] != pb[i]) {
        report.changed_decisions.push_back("instance " + std::to_string(i) + ": " +
                                           std::string(to_string(pa[i])) + " -> " +
                                           std::string(to_string(pb[i])));
      }
    }
    if (a.placement->hh_location != b.placement->hh_location) {
      report.changed_decisions.push_back(
          "hh_location: " + std::string(to_string(a.placement->hh_location)) + " -> " +
          std::string(to_string(b.placement->hh_location)));
    }
    report.objective_delta = *b.objective_value - *a.objective_value;
  }
  return report;
}

json to_json(const WhatIfReport& r) {
  return {
      {"overrides", r.overrides},
      {"base", to_json(r.base)},
      {"variant", to_json(r.variant)},
      {"changed_decisions", r.changed_decisions},
      {"objective_delta", r.objective_delta ? json(*r.objective_delta) : json(nullptr)},
  };
}

void print_what_if(std::ostream& out, const WhatIfReport& r) {
  out << "== base ==\n";
  print_result(out, r.base);
  out << "== variant";
  for (const std::string& o : r.overrides) out << ' ' << o;
  out << " ==\n";
  print_result(out, r.variant);
  out << "== changes ==\n";
  if (r.changed_decisions.empty()) out << "none\n";
  for (const std::string& c : r.changed_decisions) out << c << '\n';
  if (r.objective_delta) {
    out << "objective_delta     " << std::setprecision(10) << *r.objective_delta << '\n';
  }
}

PlacementPlan PartitionManifest::placement(std::size_t instances) const {
  PlacementPlan plan;
  plan.assignment.assign(instances, Device::Asic);
  for (const ManifestEntry& e : external_part) plan.assignment.at(e.instance_id) = Device::External;
  plan.hh_location = hh_location;
  return plan;
}

PartitionManifest partition(const AppRequirements& app, const Platform& platform,
                            const OperatorInputs& inputs) {
  const ProvisionModel model = build_model(inputs, app, {platform});
  const ProvisionResult check = solve(model);
  if (!check.feasible) {
    throw InfeasibleError(check.binding_constraints.front(),
                          "platform '" + platform.name + "' cannot host app '" + app.name +
                              "': " + check.binding_constraints.front());
  }

  const std::size_t n = app.configs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return app.configs[a].footprint_bits() > app.configs[b].footprint_bits();
  });

  std::vector<SketchConfig> on_switch;
  std::vector<bool> switch_member(n, false);
  for (std::size_t i : order) {
    on_switch.push_back(app.configs[i]);
    if (asic_fit(on_switch, platform.asic).feasible) {
      switch_member[i] = true;
    } else {
      on_switch.pop_back();
    }
  }

  PartitionManifest manifest;
  std::vector<SketchConfig> remainder;
  for (std::size_t i = 0; i < n; ++i) {
    ManifestEntry e{i, app.configs[i], app.scheme_for(app.configs[i]).fields()};
    if (switch_member[i]) {
      manifest.switch_part.push_back(std::move(e));
    } else {
      remainder.push_back(app.configs[i]);
      manifest.external_part.push_back(std::move(e));
    }
  }

  const bool needs_queue = app.required_capabilities.contains(Capability::PriorityQueue);
  manifest.hh_location =
      platform.has_external() && (!remainder.empty() || needs_queue) ? Device::External
                                                                     : Device::Asic;
  if (remainder.empty()) return manifest;

  auto fail = [&](const std::string& resource) {
    throw InfeasibleError(resource, "instances left over for the external device exceed " +
                                        resource + " on platform '" + platform.name + "'");
  };
  if (!platform.has_external()) {
    const FitReport fit = asic_fit(app.configs, platform.asic);
    fail("asic_" + std::string(to_string(fit.binding_resource)));
  }

  const DemandParams params{.hh_k = app.hh_k};
  const CapacityProfile cap =
      device_capacity(*platform.external, params.counter_bytes, params.rw_ops);
  const double hh_bytes = static_cast<double>(hh_footprint(app.hh_k)) * static_cast<double>(n);
  const bool is_fpga = std::holds_alternative<FpgaModel>(*platform.external);

  double mem = static_cast<double>(sketch_footprint(remainder));
  if (is_fpga) mem += hh_bytes * 8.0;
  if (mem > cap.mem_bits) fail("ext_memory");
  if (!is_fpga && hh_bytes > std::get<PimModel>(*platform.external).scratchpad_bytes) {
    fail("ext_scratchpad");
  }
  const double rate = counter_update_rate(remainder, inputs.traffic_pps);
  if (rate > cap.updates_per_s) fail("device_update_capacity");
  const double bw = update_bandwidth(rate, params.counter_bytes, params.rw_ops) +
                    hh_bandwidth(inputs.traffic_pps, params.hh_bytes_per_access);
  if (bw > platform.interconnect->effective_bandwidth_Bps()) fail("interconnect_bandwidth");
  if (is_fpga && fpga_check(std::get<FpgaModel>(*platform.external), remainder, 0, 1)
                         .dsp_fraction > 1.0) {
    fail("fpga_dsp");
  }
  if (update_latency_s(*platform.interconnect, params.message_bytes()) >
      inputs.latency_budget_s) {
    fail("latency_budget");
  }
  return manifest;
}

namespace {

json entry_json(const ManifestEntry& e) {
  json fields = json::array();
  for (FlowField f : e.key_fields) fields.push_back(to_string(f));
  return {
      {"instance_id", e.instance_id},
      {"kind", to_string(e.config.kind)},
      {"rows", e.config.rows},
      {"width", e.config.width},
      {"counter_bits", e.config.counter_bits},
      {"key_fields", fields},
      {"seed", e.config.seed},
  };
}

}  // namespace

json to_json(const PartitionManifest& m) {
  json sw = json::array();
  json ext = json::array();
  for (const ManifestEntry& e : m.switch_part) sw.push_back(entry_json(e));
  for (const ManifestEntry& e : m.external_part) ext.push_back(entry_json(e));
  return {
      {"version", kManifestVersion},
      {"switch_part", sw},
      {"external_part", ext},
      {"hh_location", to_string(m.hh_location)},
  };
}

std::vector<std::string> validate_manifest(const json& doc) {
  std::vector<std::string> errors;
  if (!doc.is_object()) return {"manifest is not an object"};
  const std::set<std::string> top = {"version", "switch_part", "external_part", "hh_location"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!top.contains(it.key())) errors.push_back("unknown key '" + it.key() + "'");
  }
  for (const std::string& k : top) {
    if (!doc.contains(k)) errors.push_back("missing key '" + k + "'");
  }
  if (!errors.empty()) return errors;

  if (!doc["version"].is_number_integer() || doc["version"] != kManifestVersion) {
    errors.push_back("version must be " + std::to_string(kManifestVersion));
  }
  if (!doc["hh_location"].is_string() ||
      (doc["hh_location"] != "asic" && doc["hh_location"] != "external")) {
    errors.push_back("hh_location must be 'asic' or 'external'");
  }

  const std::set<std::string> entry_keys = {"instance_id", "kind",       "rows", "width",
                                            "counter_bits", "key_fields", "seed"};
  std::set<std::uint64_t> ids;
  std::size_t total = 0;
  for (const char* part : {"switch_part", "external_part"}) {
    const json& list = doc[part];
    if (!list.is_array()) {
      errors.push_back(std::string(part) + " must be an array");
      continue;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& e = list[i];
      const std::string where = std::string(part) + "[" + std::to_string(i) + "]";
      if (!e.is_object()) {
        errors.push_back(where + " is not an object");
        continue;
      }
      bool shape_ok = e.size() == entry_keys.size();
      for (const std::string& k : entry_keys) shape_ok = shape_ok && e.contains(k);
      if (!shape_ok) {
        errors.push_back(where + " must have exactly the keys instance_id, kind, rows, width, "
                                 "counter_bits, key_fields, seed");
        continue;
      }
      for (const char* k : {"instance_id", "rows", "width", "counter_bits", "seed"}) {
        if (!e[k].is_number_unsigned()) errors.push_back(where + "." + k + " must be unsigned");
      }
      try {
        SketchConfig c;
        c.kind = parse_sketch_kind(e["kind"].get<std::string>());
        c.rows = e["rows"].get<std::uint32_t>();
        c.width = e["width"].get<std::uint32_t>();
        c.counter_bits = e["counter_bits"].get<std::uint32_t>();
        c.validate();
        std::vector<FlowField> fields;
        for (const json& f : e["key_fields"]) fields.push_back(parse_flow_field(f.get<std::string>()));
        FlowKeyScheme(0, std::move(fields));
      } catch (const std::exception& ex) {
        errors.push_back(where + ": " + ex.what());
      }
      if (e["instance_id"].is_number_unsigned() &&
          !ids.insert(e["instance_id"].get<std::uint64_t>()).second) {
        errors.push_back(where + ": instance_id appears twice");
      }
      ++total;
    }
  }
  if (errors.empty() && (ids.empty() || *ids.rbegin() != total - 1)) {
    errors.push_back("instance ids must cover 0.." + std::to_string(total == 0 ? 0 : total - 1));
  }
  return errors;
}

}  // namespace xplane
