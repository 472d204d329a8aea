#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "xplane/error.hpp"

namespace xplane::detail {

// Reads optional fields from a JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& obj, std::string context)
      : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object()) throw ConfigError(context_ + ": expected an object");
  }

  bool has(std::string_view key) const { return obj_.contains(key); }

  template <typename T>
  void read(std::string_view key, T& out) {
    seen_.emplace(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(context_ + "." + std::string(key) + ": wrong type");
    }
  }

  template <typename T>
  T require(std::string_view key) {
    if (!has(key)) throw ConfigError(context_ + ": missing '" + std::string(key) + "'");
    T out{};
    read(key, out);
    return out;
  }

  const nlohmann::json& at(std::string_view key) {
    seen_.emplace(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      throw ConfigError(context_ + ": missing '" + std::string(key) + "'");
    }
    return *it;
  }

  void mark(std::string_view key) { seen_.emplace(key); }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ConfigError(context_ + ": unknown field '" + it.key() + "'");
      }
    }
  }

  const std::string& context() const noexcept { return context_; }

 private:
  const nlohmann::json& obj_;
  std::string context_;
  std::set<std::string, std::less<>> seen_;
};

}  // namespace xplane::detail
