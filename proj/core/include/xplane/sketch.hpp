#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "xplane/flow_key.hpp"

namespace xplane {

enum class SketchKind : std::uint8_t { CountMin, CountSketch };

std::string_view to_string(SketchKind kind) noexcept;
SketchKind parse_sketch_kind(std::string_view name);

struct SketchConfig {
  SketchKind kind = SketchKind::CountMin;
  std::uint32_t rows = 3;
  std::uint32_t width = 64'000;
  std::uint32_t counter_bits = 32;
  int scheme_id = 0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument unless rows >= 1, width >= 2 and
  // counter_bits is one of 8/16/32/64.
  void validate() const;

  std::uint64_t footprint_bits() const noexcept {
    return std::uint64_t{rows} * width * counter_bits;
  }
  std::uint64_t row_bits() const noexcept {
    return std::uint64_t{width} * counter_bits;
  }

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

// A rows x width grid of counters. Count-Min adds the weight to one counter
// per row and answers with the row minimum; Count-Sketch adds a signed
// weight and answers with the median of the sign-corrected counters.
//
// Counters saturate at +/-(2^(counter_bits-1) - 1); Count-Min counters are
// additionally floored at zero. Every clamped write bumps
// saturation_events().
class SketchInstance {
 public:
  explicit SketchInstance(const SketchConfig& config);

  const SketchConfig& config() const noexcept { return config_; }

  void update(const FlowKey& key, std::int64_t weight);
  // Applies the update to a single row only. Used when individual row
  // updates may be lost in transit to an external device.
  void update_row(std::size_t row, const FlowKey& key, std::int64_t weight);

  std::int64_t query(const FlowKey& key) const;

  std::size_t column(std::size_t row, const FlowKey& key) const noexcept {
    return static_cast<std::size_t>((row_hash(row, key) >> 1) % config_.width);
  }
  int sign(std::size_t row, const FlowKey& key) const noexcept {
    if (config_.kind == SketchKind::CountMin) return 1;
    return (row_hash(row, key) & 1U) != 0 ? 1 : -1;
  }

  std::span<const std::int64_t> row(std::size_t r) const noexcept {
    return {counters_.data() + r * config_.width, config_.width};
  }
  std::int64_t counter(std::size_t r, std::size_t c) const noexcept {
    return counters_[r * config_.width + c];
  }
  std::int64_t counter_limit() const noexcept { return limit_; }
  std::uint64_t saturation_events() const noexcept { return saturations_; }

  void clear() noexcept;

  // Equal configuration and bit-identical counters.
  friend bool operator==(const SketchInstance& a, const SketchInstance& b) {
    return a.config_ == b.config_ && a.counters_ == b.counters_;
  }

 private:
  std::uint64_t row_hash(std::size_t row, const FlowKey& key) const noexcept;
  void check_scheme(const FlowKey& key) const;
  void add(std::size_t row, const FlowKey& key, std::int64_t weight);

  SketchConfig config_;
  std::vector<std::uint64_t> row_seeds_;
  std::vector<std::int64_t> counters_;
  std::int64_t limit_;
  std::uint64_t saturations_ = 0;
};

}  // namespace xplane
