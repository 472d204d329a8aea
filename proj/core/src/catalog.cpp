#include "xplane/catalog.hpp"

#include <fstream>

#include "json_util.hpp"

namespace xplane {

using nlohmann::json;
using detail::ObjectReader;

const Platform& Catalog::platform(std::string_view platform_name) const {
  auto it = platforms.find(platform_name);
  if (it == platforms.end()) {
    throw ConfigError("catalog '" + name + "' has no platform '" +
                      std::string(platform_name) + "'");
  }
  return it->second;
}

std::vector<Platform> Catalog::candidates() const {
  std::vector<Platform> out;
  out.reserve(platforms.size());
  for (const auto& [_, p] : platforms) out.push_back(p);
  return out;
}

Catalog paper_defaults() {
  Catalog c;
  c.name = "paper_defaults";
  c.default_asic = "asic_only";

  const AsicModel asic;  // calibrated defaults
  const PimModel pim;
  const FpgaModel fpga;

  auto add = [&](std::string name, std::optional<ExternalDevice> ext,
                 std::optional<InterconnectKind> link, double link_cost) {
    Platform p;
    p.name = name;
    p.asic = asic;
    p.external = std::move(ext);
    if (link) {
      p.interconnect = interconnect_defaults(*link);
      p.interconnect->cost_usd = link_cost;
    }
    c.platforms.emplace(std::move(name), std::move(p));
  };
  add("asic_only", std::nullopt, std::nullopt, 0);
  add("asic_pim_onchip", pim, InterconnectKind::OnChip, 3'000);
  add("asic_pim_onchassis", pim, InterconnectKind::OffChipOnChassis, 800);
  add("asic_fpga_onchassis", fpga, InterconnectKind::OffChipOnChassis, 800);
  add("asic_fpga_offchassis", fpga, InterconnectKind::OffChassis, 1'500);
  return c;
}

json to_json(const Platform& p) {
  json out;
  out["asic"] = {
      {"stages", p.asic.stages},
      {"sram_bits_per_stage", p.asic.sram_bits_per_stage},
      {"hash_units_per_stage", p.asic.hash_units_per_stage},
      {"stateful_alus_per_stage", p.asic.stateful_alus_per_stage},
      {"pps_capacity", p.asic.pps_capacity},
      {"cost_usd", p.asic.cost_usd},
  };
  if (p.external) {
    if (const auto* pim = std::get_if<PimModel>(&*p.external)) {
      out["external"] = {
          {"type", "pim"},
          {"banks", pim->banks},
          {"per_bank_update_rate", pim->per_bank_update_rate},
          {"total_mem_bits", pim->total_mem_bits},
          {"scratchpad_bytes", pim->scratchpad_bytes},
          {"mem_bandwidth_Bps", pim->mem_bandwidth_Bps},
          {"cost_usd", pim->cost_usd},
      };
    } else {
      const auto& f = std::get<FpgaModel>(*p.external);
      out["external"] = {
          {"type", "fpga"},
          {"dsp_total", f.dsp_total},
          {"onchip_mem_bits", f.onchip_mem_bits},
          {"proc_bandwidth_Bps", f.proc_bandwidth_Bps},
          {"dsp_fraction_per_hash_engine", f.dsp_fraction_per_hash_engine},
          {"cost_usd", f.cost_usd},
      };
    }
  }
  if (p.interconnect) {
    const auto& l = *p.interconnect;
    out["interconnect"] = {
        {"kind", to_string(l.kind)},
        {"bandwidth_Bps", l.bandwidth_Bps},
        {"latency_s", l.latency_s},
        {"efficiency", l.efficiency},
        {"cost_usd", l.cost_usd},
        {"extensibility", to_string(l.extensibility())},
    };
  }
  return out;
}

Platform platform_from_json(const std::string& name, const json& doc) {
  const std::string ctx = "platforms." + name;
  ObjectReader top(doc, ctx);
  Platform p;
  p.name = name;

  {
    ObjectReader r(top.at("asic"), ctx + ".asic");
    r.read("stages", p.asic.stages);
    r.read("sram_bits_per_stage", p.asic.sram_bits_per_stage);
    r.read("hash_units_per_stage", p.asic.hash_units_per_stage);
    r.read("stateful_alus_per_stage", p.asic.stateful_alus_per_stage);
    r.read("pps_capacity", p.asic.pps_capacity);
    r.read("cost_usd", p.asic.cost_usd);
    r.finish();
  }

  if (top.has("external")) {
    ObjectReader r(top.at("external"), ctx + ".external");
    const auto type = r.require<std::string>("type");
    if (type == "pim") {
      PimModel m;
      r.read("banks", m.banks);
      r.read("per_bank_update_rate", m.per_bank_update_rate);
      r.read("total_mem_bits", m.total_mem_bits);
      r.read("scratchpad_bytes", m.scratchpad_bytes);
      r.read("mem_bandwidth_Bps", m.mem_bandwidth_Bps);
      r.read("cost_usd", m.cost_usd);
      p.external = m;
    } else if (type == "fpga") {
      FpgaModel m;
      r.read("dsp_total", m.dsp_total);
      r.read("onchip_mem_bits", m.onchip_mem_bits);
      r.read("proc_bandwidth_Bps", m.proc_bandwidth_Bps);
      r.read("dsp_fraction_per_hash_engine", m.dsp_fraction_per_hash_engine);
      r.read("cost_usd", m.cost_usd);
      p.external = m;
    } else {
      throw ConfigError(ctx + ".external.type: expected 'pim' or 'fpga'");
    }
    r.finish();
  }

  if (top.has("interconnect")) {
    ObjectReader r(top.at("interconnect"), ctx + ".interconnect");
    const auto kind = parse_interconnect_kind(r.require<std::string>("kind"));
    InterconnectModel l = interconnect_defaults(kind);
    r.read("bandwidth_Bps", l.bandwidth_Bps);
    r.read("latency_s", l.latency_s);
    r.read("efficiency", l.efficiency);
    r.read("cost_usd", l.cost_usd);
    std::string ext(to_string(l.extensibility()));
    r.read("extensibility", ext);
    if (ext != to_string(l.extensibility())) {
      throw ConfigError(ctx + ".interconnect.extensibility: " + std::string(to_string(kind)) +
                        " is fixed at " + std::string(to_string(l.extensibility())));
    }
    r.finish();
    p.interconnect = l;
  }
  top.finish();
  p.validate();
  return p;
}

json to_json(const Catalog& c) {
  json platforms = json::object();
  for (const auto& [name, p] : c.platforms) platforms[name] = to_json(p);
  return {
      {"version", 1},
      {"name", c.name},
      {"default_asic", c.default_asic},
      {"constants",
       {{"reference_pps", c.constants.reference_pps},
        {"fpga_required_bandwidth_Bps", c.constants.fpga_required_bandwidth_Bps}}},
      {"platforms", platforms},
  };
}

Catalog catalog_from_json(const json& doc) {
  ObjectReader r(doc, "catalog");
  Catalog c;
  if (r.require<int>("version") != 1) throw ConfigError("catalog: unsupported version");
  r.read("name", c.name);
  if (r.has("constants")) {
    ObjectReader k(r.at("constants"), "constants");
    k.read("reference_pps", c.constants.reference_pps);
    k.read("fpga_required_bandwidth_Bps", c.constants.fpga_required_bandwidth_Bps);
    k.finish();
  }
  const json& platforms = r.at("platforms");
  if (!platforms.is_object() || platforms.empty()) {
    throw ConfigError("catalog: 'platforms' must be a non-empty object");
  }
  for (auto it = platforms.begin(); it != platforms.end(); ++it) {
    c.platforms.emplace(it.key(), platform_from_json(it.key(), it.value()));
  }
  c.default_asic = c.platforms.begin()->first;
  r.read("default_asic", c.default_asic);
  r.finish();
  c.platform(c.default_asic);  // must exist
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json load_catalog_json(std::string_view name_or_path) {
  if (name_or_path == "paper_defaults") return to_json(paper_defaults());
  return read_json_file(std::string(name_or_path));
}

Catalog load_catalog(std::string_view name_or_path) {
  if (name_or_path == "paper_defaults") return paper_defaults();
  return catalog_from_json(read_json_file(std::string(name_or_path)));
}

json* find_path(json& doc, std::string_view dotted_path) {
  if (dotted_path.empty()) return nullptr;
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = dotted_path.find('.', start);
    const std::string key(dotted_path.substr(start, dot == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : dot - start));
    if (node->is_object() && node->contains(key)) {
      node = &(*node)[key];
    } else if (node->is_array() && !key.empty() &&
               key.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(key) < node->size()) {
      node = &(*node)[std::stoul(key)];
    } else {
      return nullptr;
    }
    if (dot == std::string_view::npos) return node;
    start = dot + 1;
  }
}

void apply_override(json& doc, std::string_view dotted_path, std::string_view value) {
  if (dotted_path.empty()) throw ConfigError("empty override path");
  json* node = find_path(doc, dotted_path);
  if (!node) throw ConfigError("unknown field '" + std::string(dotted_path) + "'");

  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = std::string(value);
  const bool both_numbers = node->is_number() && parsed.is_number();
  if (!both_numbers && node->type() != parsed.type()) {
    throw ConfigError("override of '" + std::string(dotted_path) + "' changes its type from " +
                      node->type_name() + " to " + parsed.type_name());
  }
  *node = std::move(parsed);
}

void apply_override(json& doc, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  apply_override(doc, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace xplane
