#include "xplane/app.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "json_util.hpp"
#include "xplane/catalog.hpp"

namespace xplane {

using nlohmann::json;
using detail::ObjectReader;

const FlowKeyScheme& AppRequirements::scheme_for(const SketchConfig& config) const {
  for (const FlowKeyScheme& s : schemes) {
    if (s.id() == config.scheme_id) return s;
  }
  throw ConfigError("app '" + name + "': no flow key scheme " +
                    std::to_string(config.scheme_id));
}

void AppRequirements::validate() const {
  if (configs.empty()) throw ConfigError("app '" + name + "' has no sketch instances");
  if (hh_k < 1) throw ConfigError("app '" + name + "': hh_k must be >= 1");
  std::set<int> ids;
  for (const FlowKeyScheme& s : schemes) {
    if (!ids.insert(s.id()).second) {
      throw ConfigError("app '" + name + "': duplicate scheme id " + std::to_string(s.id()));
    }
  }
  std::set<int> used;
  for (const SketchConfig& c : configs) {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("app '" + name + "': " + e.what());
    }
    scheme_for(c);
    if (!used.insert(c.scheme_id).second) {
      throw ConfigError("app '" + name + "': scheme " + std::to_string(c.scheme_id) +
                        " backs more than one instance");
    }
  }
}

std::vector<FlowKeyScheme> reference_schemes() {
  using F = FlowField;
  return {
      FlowKeyScheme(0, {F::SrcIp}),
      FlowKeyScheme(1, {F::DstIp}),
      FlowKeyScheme(2, {F::SrcIp, F::DstIp}),
      FlowKeyScheme(3, {F::SrcPort}),
      FlowKeyScheme(4, {F::DstPort}),
      FlowKeyScheme(5, {F::SrcIp, F::SrcPort}),
      FlowKeyScheme(6, {F::DstIp, F::DstPort}),
      FlowKeyScheme(7, {F::Proto}),
      FlowKeyScheme(8, {F::SrcIp, F::DstIp, F::Proto}),
      FlowKeyScheme::five_tuple(9),
  };
}

AppRequirements uniform_app(std::size_t count, SketchKind kind) {
  auto schemes = reference_schemes();
  if (count < 1 || count > schemes.size()) {
    throw ConfigError("uniform apps hold between 1 and 10 instances");
  }
  AppRequirements app;
  app.name = std::to_string(count) + "x_" + std::string(to_string(kind) == "count_min"
                                                            ? "countmin"
                                                            : "countsketch");
  app.schemes.assign(schemes.begin(), schemes.begin() + static_cast<long>(count));
  for (std::size_t i = 0; i < count; ++i) {
    SketchConfig c;
    c.kind = kind;
    c.rows = 3;
    c.width = 64'000;
    c.counter_bits = 32;
    c.scheme_id = app.schemes[i].id();
    c.seed = 0x5eed0000ULL + i;
    app.configs.push_back(c);
  }
  app.hh_k = kDefaultHhK;
  app.required_capabilities = {Capability::CounterUpdate, Capability::PriorityQueue};
  return app;
}

AppRequirements paper_app() {
  AppRequirements app = uniform_app(10, SketchKind::CountMin);
  app.name = "paper_app";
  return app;
}

std::optional<AppRequirements> builtin_app(std::string_view name) {
  if (name == "paper_app") return paper_app();
  const std::size_t x = name.find("x_");
  if (x == std::string_view::npos || x == 0) return std::nullopt;
  std::size_t count = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + x, count);
  if (ec != std::errc() || ptr != name.data() + x || count < 1 || count > 10) {
    return std::nullopt;
  }
  const std::string_view kind = name.substr(x + 2);
  if (kind == "countsketch") return uniform_app(count, SketchKind::CountSketch);
  if (kind == "countmin") return uniform_app(count, SketchKind::CountMin);
  return std::nullopt;
}

json to_json(const AppRequirements& app) {
  json instances = json::array();
  for (std::size_t i = 0; i < app.configs.size(); ++i) {
    const SketchConfig& c = app.configs[i];
    json fields = json::array();
    for (FlowField f : app.scheme_for(c).fields()) fields.push_back(to_string(f));
    instances.push_back({
        {"instance_id", i},
        {"scheme_id", c.scheme_id},
        {"key_fields", fields},
        {"kind", to_string(c.kind)},
        {"rows", c.rows},
        {"width", c.width},
        {"counter_bits", c.counter_bits},
        {"seed", c.seed},
    });
  }
  json caps = json::array();
  for (Capability cap : app.required_capabilities) caps.push_back(to_string(cap));
  return {
      {"name", app.name},
      {"hh_k", app.hh_k},
      {"required_capabilities", caps},
      {"instances", instances},
  };
}

namespace {

AppRequirements parse_app(const json& doc) {
  ObjectReader r(doc, "app");
  AppRequirements app;
  r.read("name", app.name);
  r.read("hh_k", app.hh_k);
  if (r.has("required_capabilities")) {
    app.required_capabilities.clear();
    for (const json& cap : r.at("required_capabilities")) {
      app.required_capabilities.insert(parse_capability(cap.get<std::string>()));
    }
  }
  const json& instances = r.at("instances");
  if (!instances.is_array()) throw ConfigError("app.instances must be an array");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    ObjectReader in(instances[i], "app.instances." + std::to_string(i));
    SketchConfig c;
    std::uint64_t id = i;
    in.read("instance_id", id);
    if (id != i) throw ConfigError(in.context() + ": instance_id must equal position");
    c.scheme_id = static_cast<int>(i);
    in.read("scheme_id", c.scheme_id);
    c.kind = parse_sketch_kind(in.require<std::string>("kind"));
    in.read("rows", c.rows);
    in.read("width", c.width);
    in.read("counter_bits", c.counter_bits);
    in.read("seed", c.seed);
    std::vector<FlowField> fields;
    for (const json& f : in.at("key_fields")) {
      fields.push_back(parse_flow_field(f.get<std::string>()));
    }
    in.finish();
    try {
      app.schemes.emplace_back(c.scheme_id, std::move(fields));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(in.context() + ": " + e.what());
    }
    app.configs.push_back(c);
  }
  r.finish();
  app.validate();
  return app;
}

}  // namespace

AppRequirements app_from_json(const json& doc) {
  try {
    return parse_app(doc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("app: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("app: ") + e.what());
  }
}

AppRequirements load_app(std::string_view name_or_path) {
  if (auto app = builtin_app(name_or_path)) return *app;
  return app_from_json(read_json_file(std::string(name_or_path)));
}

}  // namespace xplane
