#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplane/flow_key.hpp"
#include "xplane/platform.hpp"
#include "xplane/sketch.hpp"

namespace xplane {

// A monitoring application: its sketch instances (instance id = position)
// and what it needs from the data plane.
struct AppRequirements {
  std::string name;
  std::vector<FlowKeyScheme> schemes;
  std::vector<SketchConfig> configs;
  std::uint64_t hh_k = kDefaultHhK;
  std::set<Capability> required_capabilities = {Capability::CounterUpdate};

  std::size_t size() const noexcept { return configs.size(); }
  const FlowKeyScheme& scheme_for(const SketchConfig& config) const;
  // Throws ConfigError when there are no instances, scheme ids repeat, or a
  // config is invalid.
  void validate() const;
};

// Ten flow-key schemes from single addresses up to the 5-tuple.
std::vector<FlowKeyScheme> reference_schemes();

// Ten Count-Min instances, 3 x 64,000 32-bit counters each, one per
// reference scheme, with a top-100 heavy-hitter queue.
AppRequirements paper_app();
// `count` instances of the same shape over the first `count` reference
// schemes.
AppRequirements uniform_app(std::size_t count, SketchKind kind);

// "paper_app", "<N>x_countsketch" or "<N>x_countmin" (1 <= N <= 10).
std::optional<AppRequirements> builtin_app(std::string_view name);

nlohmann::json to_json(const AppRequirements& app);
AppRequirements app_from_json(const nlohmann::json& doc);
// Built-in name first, otherwise a JSON file path.
AppRequirements load_app(std::string_view name_or_path);

}  // namespace xplane
