#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplane/platform.hpp"

namespace xplane {

// Figures that are quoted rather than derived.
struct CatalogConstants {
  double reference_pps = 1.43e6;
  double fpga_required_bandwidth_Bps = 0.51e9;

  friend bool operator==(const CatalogConstants&, const CatalogConstants&) = default;
};

// A named set of candidate platforms. Platforms are keyed (and iterated) by
// name.
struct Catalog {
  std::string name;
  std::map<std::string, Platform, std::less<>> platforms;
  // Platform whose ASIC model answers fit checks.
  std::string default_asic;
  CatalogConstants constants;

  const Platform& platform(std::string_view name) const;
  const AsicModel& asic() const { return platform(default_asic).asic; }
  std::vector<Platform> candidates() const;

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

// Calibrated defaults; also shipped as data/catalogs/paper_defaults.json.
Catalog paper_defaults();

nlohmann::json to_json(const Platform& platform);
Platform platform_from_json(const std::string& name, const nlohmann::json& doc);
nlohmann::json to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& doc);

// Built-in catalog name, otherwise a JSON file.
nlohmann::json load_catalog_json(std::string_view name_or_path);
Catalog load_catalog(std::string_view name_or_path);

nlohmann::json read_json_file(const std::string& path);

// Field at a dotted path (object keys or array indices), or nullptr.
nlohmann::json* find_path(nlohmann::json& doc, std::string_view dotted_path);

// Sets the existing field at a dotted path ("platforms.x.asic.cost_usd") to
// `value`, parsed as JSON when possible and as a string otherwise. Throws
// ConfigError if the path does not exist or the value changes the field's
// type.
void apply_override(nlohmann::json& doc, std::string_view dotted_path,
                    std::string_view value);
// "path=value"
void apply_override(nlohmann::json& doc, std::string_view assignment);

}  // namespace xplane
