#include "xplane/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xplane/app.hpp"
#include "xplane/catalog.hpp"
#include "xplane/error.hpp"
#include "xplane/platform.hpp"
#include "xplane/provisioner.hpp"
#include "xplane/simulator.hpp"
#include "xplane/workload.hpp"

namespace xplane::cli {

namespace {

using nlohmann::json;

// Compact scientific form with three significant digits in the mantissa's
// natural scale, e.g. 42900000 -> "42.9e6". Small integers print as is.
std::string engineering(double v) {
  if (v == 0) return "0";
  std::ostringstream s;
  if (std::abs(v) < 1e4 && v == std::floor(v)) {
    s << static_cast<long long>(v);
    return s.str();
  }
  int exp = 0;
  double m = v;
  while (std::abs(m) >= 1000) {
    m /= 1000;
    exp += 3;
  }
  s << std::setprecision(6) << m;
  if (exp) s << 'e' << exp;
  return s.str();
}

struct Common {
  std::string format = "human";
  std::string output;
  std::string catalog;
  std::vector<std::string> overrides;
};

class Output {
 public:
  Output(const Common& c, std::ostream& fallback) : format_(c.format) {
    if (!c.output.empty()) {
      file_.open(c.output, std::ios::binary);
      if (!file_) throw ConfigError("cannot write " + c.output);
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  bool machine() const { return format_ == "machine"; }
  std::ostream& stream() { return *stream_; }
  void emit(const json& doc) { *stream_ << doc.dump(2) << '\n'; }

 private:
  std::string format_;
  std::ofstream file_;
  std::ostream* stream_;
};

std::string catalog_source(const Common& c) {
  if (!c.catalog.empty()) return c.catalog;
  if (const char* env = std::getenv("XPLANE_CATALOG"); env && *env) return env;
  return "paper_defaults";
}

// "catalog" or "catalog:platform".
std::pair<std::string, std::string> split_ref(const std::string& ref) {
  const auto colon = ref.rfind(':');
  if (colon == std::string::npos || colon == 0) return {ref, ""};
  return {ref.substr(0, colon), ref.substr(colon + 1)};
}

Platform resolve_platform(const json& catalog_doc, const std::string& name,
                          const std::vector<std::string>& overrides) {
  const Catalog catalog = catalog_from_json(catalog_doc);
  json doc = to_json(catalog.platform(name));
  for (const std::string& o : overrides) apply_override(doc, o);
  return platform_from_json(name, doc);
}

void add_common(CLI::App* cmd, Common& c, bool with_catalog, bool with_overrides) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));
  cmd->add_option("--output,-o", c.output, "Write output to this file instead of stdout");
  if (with_catalog) {
    cmd->add_option("--catalog", c.catalog,
                    "Platform catalog: 'paper_defaults' or a JSON file "
                    "(default: $XPLANE_CATALOG, then paper_defaults)");
  }
  if (with_overrides) {
    cmd->add_option("--override", c.overrides, "Dotted-path override, key=value (repeatable)");
  }
}

int cmd_estimate(const Common& c, const std::string& app_ref, double pps, Output& out) {
  const AppRequirements app = load_app(app_ref);
  const Catalog catalog = load_catalog(catalog_source(c));
  DemandParams params;
  params.hh_k = app.hh_k;
  const DemandProfile d = demand_profile(app.configs, pps, params);
  const std::uint64_t hh_bits = d.hh_footprint_bytes * 8;

  json platforms = json::array();
  for (const auto& [name, p] : catalog.platforms) {
    if (!p.has_external()) continue;
    const CapacityProfile cap = device_capacity(*p.external);
    json row = {
        {"platform", name},
        {"device", device_type(*p.external)},
        {"device_updates_per_s", cap.updates_per_s},
        {"device_mem_bits", cap.mem_bits},
        {"interconnect_Bps", p.interconnect->effective_bandwidth_Bps()},
        {"update_headroom", cap.updates_per_s / d.counter_updates_per_s},
        {"memory_fits",
         static_cast<double>(d.counter_footprint_bits) +
                 static_cast<double>(d.hh_total_footprint_bytes) * 8.0 <=
             cap.mem_bits},
    };
    if (const auto* fpga = std::get_if<FpgaModel>(&*p.external)) {
      const FpgaCheck f = fpga_check(*fpga, app.configs, d.hh_footprint_bytes,
                                     catalog.constants.fpga_required_bandwidth_Bps);
      row["fpga_required_Bps"] = f.required_Bps;
      row["fpga_bandwidth_headroom"] = f.headroom_ratio;
      row["fpga_dsp_fraction"] = f.dsp_fraction;
      row["memory_fits"] = f.memory_fits;
    }
    platforms.push_back(row);
  }

  if (out.machine()) {
    out.emit({
        {"app", app.name},
        {"pps", pps},
        {"demand",
         {{"counter_updates_per_s", d.counter_updates_per_s},
          {"update_bandwidth_Bps", d.update_bandwidth_Bps},
          {"counter_footprint_bits", d.counter_footprint_bits},
          {"hh_footprint_bytes", d.hh_footprint_bytes},
          {"hh_footprint_bits", hh_bits},
          {"hh_total_footprint_bytes", d.hh_total_footprint_bytes},
          {"hh_bandwidth_Bps", d.hh_bandwidth_Bps}}},
        {"platforms", platforms},
    });
    return kOk;
  }

  std::ostream& s = out.stream();
  auto row = [&](const char* name, double v, const char* unit) {
    s << std::left << std::setw(26) << name << std::right << std::setw(12) << engineering(v)
      << "  " << unit << '\n';
  };
  s << "app " << app.name << ", " << app.size() << " instances at " << engineering(pps)
    << " pps\n\n";
  row("counter_updates_per_s", d.counter_updates_per_s, "updates/s");
  row("update_bandwidth", d.update_bandwidth_Bps, "B/s");
  row("counter_footprint", static_cast<double>(d.counter_footprint_bits), "bits");
  row("hh_footprint", static_cast<double>(d.hh_footprint_bytes), "B per queue");
  row("hh_footprint_bits", static_cast<double>(hh_bits), "bits per queue");
  row("hh_total_footprint", static_cast<double>(d.hh_total_footprint_bytes), "B");
  row("hh_bandwidth", d.hh_bandwidth_Bps, "B/s");
  if (!platforms.empty()) {
    s << '\n'
      << std::left << std::setw(24) << "platform" << std::setw(6) << "dev" << std::right
      << std::setw(14) << "updates/s" << std::setw(10) << "headroom" << std::setw(8)
      << "mem" << '\n';
    for (const json& p : platforms) {
      s << std::left << std::setw(24) << p["platform"].get<std::string>() << std::setw(6)
        << p["device"].get<std::string>() << std::right << std::setw(14)
        << engineering(p["device_updates_per_s"].get<double>()) << std::setw(10)
        << std::setprecision(4) << p["update_headroom"].get<double>() << std::setw(8)
        << (p["memory_fits"].get<bool>() ? "fits" : "NO") << '\n';
      if (p.contains("fpga_bandwidth_headroom")) {
        s << "  fpga bandwidth " << engineering(p["fpga_required_Bps"].get<double>())
          << " B/s required, headroom " << std::setprecision(4)
          << p["fpga_bandwidth_headroom"].get<double>() << "x, DSP "
          << p["fpga_dsp_fraction"].get<double>() * 100 << "%\n";
      }
    }
  }
  return kOk;
}

int cmd_fit_check(const Common& c, const std::string& app_ref, const std::string& asic_ref,
                  Output& out) {
  const AppRequirements app = load_app(app_ref);
  auto [cat_ref, platform_name] = split_ref(asic_ref.empty() ? catalog_source(c) : asic_ref);
  const json catalog_doc = load_catalog_json(cat_ref);
  const Catalog catalog = catalog_from_json(catalog_doc);
  if (platform_name.empty()) platform_name = catalog.default_asic;
  const Platform platform = resolve_platform(catalog_doc, platform_name, c.overrides);
  const FitReport fit = asic_fit(app.configs, platform.asic);

  if (out.machine()) {
    json stages = json::array();
    for (std::size_t s = 0; s < fit.stages.size(); ++s) {
      const StageUsage& u = fit.stages[s];
      stages.push_back({{"stage", s},
                        {"rows", u.rows},
                        {"sram_bits", u.sram_bits},
                        {"sram_utilization", fit.sram_utilization(s, platform.asic)},
                        {"hash_units", u.hash_units},
                        {"stateful_alus", u.stateful_alus}});
    }
    json doc = {{"app", app.name},
                {"platform", platform.name},
                {"instances", app.size()},
                {"feasible", fit.feasible},
                {"binding_resource", to_string(fit.binding_resource)},
                {"stages", stages}};
    doc["failed_instance"] = fit.failed_instance ? json(*fit.failed_instance) : json(nullptr);
    out.emit(doc);
  } else {
    std::ostream& s = out.stream();
    s << "app " << app.name << " (" << app.size() << " instances) on " << platform.name
      << ": " << (fit.feasible ? "feasible" : "infeasible") << '\n';
    if (!fit.feasible) {
      s << "binding resource: " << to_string(fit.binding_resource) << " (instance "
        << *fit.failed_instance << ")\n";
    }
    s << '\n' << std::setw(6) << "stage" << std::setw(6) << "rows" << std::setw(10) << "sram%"
      << std::setw(7) << "hash" << std::setw(7) << "salu" << '\n';
    for (std::size_t i = 0; i < fit.stages.size(); ++i) {
      const StageUsage& u = fit.stages[i];
      s << std::setw(6) << i << std::setw(6) << u.rows << std::setw(10) << std::fixed
        << std::setprecision(1) << 100 * fit.sram_utilization(i, platform.asic)
        << std::defaultfloat << std::setw(7) << u.hash_units << std::setw(7)
        << u.stateful_alus << '\n';
    }
  }
  return fit.feasible ? kOk : kInfeasible;
}

struct SimArgs {
  std::string trace;
  std::string app;
  std::string platform;
  std::string placement = "auto";
  std::uint64_t epoch_us = SimConfig{}.epoch_us;
  double latency_base_s = SimConfig{}.latency_base_s;
  std::uint64_t seed = SimConfig{}.seed;
  std::string weight = "packets";
};

int cmd_simulate(const Common& c, const SimArgs& a, Output& out) {
  const AppRequirements app = load_app(a.app);
  const Trace trace = parse_trace(std::filesystem::path(a.trace));
  const json catalog_doc = load_catalog_json(catalog_source(c));
  const Catalog catalog = catalog_from_json(catalog_doc);
  const Platform platform = resolve_platform(catalog_doc, a.platform, c.overrides);

  PlacementPlan plan;
  if (a.placement == "auto") {
    OperatorInputs inputs;
    inputs.traffic_pps = stats(trace).avg_pps;
    plan = partition(app, platform, inputs).placement(app.size());
  } else {
    plan = PlacementPlan::all(app.size(), parse_device(a.placement));
  }

  SimConfig cfg;
  cfg.epoch_us = a.epoch_us;
  cfg.latency_base_s = a.latency_base_s;
  cfg.seed = a.seed;
  cfg.weight_mode = a.weight == "bytes" ? WeightMode::Bytes : WeightMode::Packets;
  const SimulationReport report = simulate(trace, platform, plan, app, cfg);

  if (out.machine()) {
    out.emit(to_json(report));
  } else {
    print_report(out.stream(), report);
  }
  return kOk;
}

struct ProvisionArgs {
  std::string app;
  std::optional<double> pps;
  std::optional<double> latency_budget;
  std::optional<double> cost_budget;
  std::optional<std::string> objective;
  std::vector<std::string> deltas;
};

json scenario_for(const Common& c, const ProvisionArgs& a) {
  const AppRequirements app = load_app(a.app);
  const Catalog catalog = load_catalog(catalog_source(c));
  OperatorInputs inputs;
  inputs.traffic_pps = a.pps.value_or(catalog.constants.reference_pps);
  if (a.latency_budget) inputs.latency_budget_s = *a.latency_budget;
  if (a.cost_budget) inputs.cost_budget_usd = *a.cost_budget;
  if (a.objective) inputs.objective = parse_objective(*a.objective);
  json scenario = make_scenario(inputs, app, catalog);
  for (const std::string& o : c.overrides) apply_scenario_override(scenario, o);
  return scenario;
}

int cmd_provision(const Common& c, const ProvisionArgs& a, Output& out) {
  const ProvisionResult r = provision(scenario_for(c, a));
  if (out.machine()) {
    out.emit(to_json(r));
  } else {
    print_result(out.stream(), r);
  }
  return r.feasible ? kOk : kInfeasible;
}

int cmd_what_if(const Common& c, const ProvisionArgs& a, Output& out) {
  const WhatIfReport r = what_if(scenario_for(c, a), a.deltas);
  if (out.machine()) {
    out.emit(to_json(r));
  } else {
    print_what_if(out.stream(), r);
  }
  return kOk;
}

int cmd_partition(const Common& c, const std::string& app_ref, const std::string& platform_name,
                  std::optional<double> pps, Output& out) {
  const AppRequirements app = load_app(app_ref);
  const json catalog_doc = load_catalog_json(catalog_source(c));
  const Catalog catalog = catalog_from_json(catalog_doc);
  const Platform platform = resolve_platform(catalog_doc, platform_name, c.overrides);
  OperatorInputs inputs;
  inputs.traffic_pps = pps.value_or(catalog.constants.reference_pps);
  const PartitionManifest m = partition(app, platform, inputs);

  if (out.machine()) {
    out.emit(to_json(m));
    return kOk;
  }
  std::ostream& s = out.stream();
  s << "app " << app.name << " on " << platform.name << ": " << m.switch_part.size()
    << " on switch, " << m.external_part.size() << " external, heavy hitters on "
    << to_string(m.hh_location) << "\n\n"
    << std::left << std::setw(6) << "inst" << std::setw(10) << "part" << std::setw(14)
    << "kind" << std::setw(12) << "shape" << "key" << '\n';
  auto print = [&](const ManifestEntry& e, const char* part) {
    std::string key;
    for (FlowField f : e.key_fields) key += (key.empty() ? "" : "+") + std::string(to_string(f));
    s << std::left << std::setw(6) << e.instance_id << std::setw(10) << part << std::setw(14)
      << to_string(e.config.kind) << std::setw(12)
      << (std::to_string(e.config.rows) + "x" + std::to_string(e.config.width)) << key << '\n';
  };
  for (const auto& e : m.switch_part) print(e, "switch");
  for (const auto& e : m.external_part) print(e, "external");
  return kOk;
}

struct GenArgs {
  double rate = 1000;
  double duration = 1;
  std::uint32_t flows = 1000;
  double zipf = 1.1;
  std::uint64_t seed = 1;
};

int cmd_gen_trace(const Common& c, const GenArgs& g, std::ostream& fallback) {
  SyntheticSpec spec{g.rate, g.duration, g.flows, g.zipf, g.seed};
  spec.validate();
  std::ofstream file;
  std::ostream* out = &fallback;
  if (!c.output.empty()) {
    file.open(c.output, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + c.output);
    out = &file;
  }
  // Streamed so long traces never sit in memory.
  TraceGenerator gen(spec);
  *out << kTraceCsvHeader << '\n';
  std::string line;
  while (!gen.done()) {
    line.clear();
    format_record(line, gen.next());
    *out << line;
  }
  if (!*out) throw ConfigError("error writing trace");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sketch-monitoring resource estimator, simulator and provisioning planner",
               "xplane"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  Common common;
  std::string app_ref = "paper_app";
  double pps = 1.43e6;
  std::string asic_ref;
  SimArgs sim;
  ProvisionArgs prov;
  std::string platform_name;
  std::optional<double> partition_pps;
  GenArgs gen;

  auto* estimate = app.add_subcommand("estimate", "Demand arithmetic for an app at a packet rate");
  estimate->add_option("--app", app_ref, "Built-in app name or app JSON file")->required();
  estimate->add_option("--pps", pps, "Packet rate")->check(CLI::PositiveNumber);
  add_common(estimate, common, true, false);

  auto* fit = app.add_subcommand("fit-check", "Check whether an app fits the switch pipeline");
  fit->add_option("--app", app_ref, "Built-in app name or app JSON file")->required();
  fit->add_option("--asic", asic_ref, "Catalog, optionally ':platform' (default: its default ASIC)");
  add_common(fit, common, false, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "Trace-driven simulation on a platform");
  simulate_cmd->add_option("--trace", sim.trace, "Trace CSV file")->required();
  simulate_cmd->add_option("--app", sim.app, "Built-in app name or app JSON file")->required();
  simulate_cmd->add_option("--platform", sim.platform, "Platform name in the catalog")->required();
  simulate_cmd->add_option("--placement", sim.placement, "auto (partition), asic or external")
      ->check(CLI::IsMember({"auto", "asic", "external"}));
  simulate_cmd->add_option("--epoch-us", sim.epoch_us, "Epoch length")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--latency-base", sim.latency_base_s, "Idle device service time (s)");
  simulate_cmd->add_option("--seed", sim.seed, "Drop sampling seed");
  simulate_cmd->add_option("--weight", sim.weight, "Update weight")
      ->check(CLI::IsMember({"packets", "bytes"}));
  add_common(simulate_cmd, common, true, true);

  auto add_provision_flags = [&](CLI::App* cmd) {
    cmd->add_option("--app", prov.app, "Built-in app name or app JSON file")->required();
    cmd->add_option("--pps", prov.pps, "Traffic estimate (default: catalog reference rate)");
    cmd->add_option("--latency-budget", prov.latency_budget, "Per-update latency budget (s)");
    cmd->add_option("--cost-budget", prov.cost_budget, "Capital cost budget (USD)");
    cmd->add_option("--objective", prov.objective, "min-cost or max-headroom")
        ->check(CLI::IsMember({"min-cost", "max-headroom", "MinCost", "MaxBandwidthHeadroom"}));
    add_common(cmd, common, true, true);
  };
  auto* provision_cmd = app.add_subcommand("provision", "Choose the best platform and placement");
  add_provision_flags(provision_cmd);
  auto* whatif = app.add_subcommand("what-if", "Re-solve provisioning under overrides");
  add_provision_flags(whatif);
  whatif->add_option("--delta", prov.deltas, "Scenario override, path=value (repeatable)")
      ->required();

  auto* part = app.add_subcommand("partition", "Split an app between switch and external device");
  part->add_option("--app", app_ref, "Built-in app name or app JSON file")->required();
  part->add_option("--platform", platform_name, "Platform name in the catalog")->required();
  part->add_option("--pps", partition_pps, "Traffic estimate (default: catalog reference rate)");
  add_common(part, common, true, true);

  auto* gen_cmd = app.add_subcommand("gen-trace", "Write a synthetic trace CSV");
  gen_cmd->add_option("--rate", gen.rate, "Packets per second")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--duration", gen.duration, "Seconds")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--flows", gen.flows, "Distinct 5-tuples")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--zipf", gen.zipf, "Zipf exponent (0 = uniform)")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--output,-o", common.output, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_trace(common, gen, out);
    Output output(common, out);
    if (estimate->parsed()) return cmd_estimate(common, app_ref, pps, output);
    if (fit->parsed()) return cmd_fit_check(common, app_ref, asic_ref, output);
    if (simulate_cmd->parsed()) return cmd_simulate(common, sim, output);
    if (provision_cmd->parsed()) return cmd_provision(common, prov, output);
    if (whatif->parsed()) return cmd_what_if(common, prov, output);
    if (part->parsed()) return cmd_partition(common, app_ref, platform_name, partition_pps, output);
  } catch (const InfeasibleError& e) {
    err << "infeasible (" << e.resource() << "): " << e.what() << '\n';
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  err << app.help();
  return kInputError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace xplane::cli
