#include "xplane/sketch.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "xplane/hash.hpp"

namespace xplane {

std::string_view to_string(SketchKind kind) noexcept {
  return kind == SketchKind::CountMin ? "count_min" : "count_sketch";
}

SketchKind parse_sketch_kind(std::string_view name) {
  if (name == "count_min" || name == "CountMin" || name == "cm") {
    return SketchKind::CountMin;
  }
  if (name == "count_sketch" || name == "CountSketch" || name == "cs") {
    return SketchKind::CountSketch;
  }
  throw std::invalid_argument("unknown sketch kind '" + std::string(name) + "'");
}

void SketchConfig::validate() const {
  if (rows < 1) throw std::invalid_argument("sketch rows must be >= 1");
  if (width < 2) throw std::invalid_argument("sketch width must be >= 2");
  if (counter_bits != 8 && counter_bits != 16 && counter_bits != 32 &&
      counter_bits != 64) {
    throw std::invalid_argument("counter_bits must be 8, 16, 32 or 64, got " +
                                std::to_string(counter_bits));
  }
}

SketchInstance::SketchInstance(const SketchConfig& config) : config_(config) {
  config_.validate();
  row_seeds_.reserve(config_.rows);
  for (std::uint32_t r = 0; r < config_.rows; ++r) {
    row_seeds_.push_back(row_seed(config_.seed, r));
  }
  counters_.assign(std::size_t{config_.rows} * config_.width, 0);
  limit_ = config_.counter_bits == 64
               ? INT64_MAX
               : (std::int64_t{1} << (config_.counter_bits - 1)) - 1;
}

std::uint64_t SketchInstance::row_hash(std::size_t row,
                                       const FlowKey& key) const noexcept {
  return hash_bytes(key.bytes(), row_seeds_[row]);
}

void SketchInstance::check_scheme(const FlowKey& key) const {
  if (key.scheme_id() != config_.scheme_id) {
    throw std::invalid_argument("flow key of scheme " +
                                std::to_string(key.scheme_id()) +
                                " offered to sketch of scheme " +
                                std::to_string(config_.scheme_id));
  }
}

void SketchInstance::add(std::size_t row, const FlowKey& key, std::int64_t weight) {
  std::int64_t& cell = counters_[row * config_.width + column(row, key)];
  const std::int64_t delta = sign(row, key) * weight;
  const std::int64_t floor = config_.kind == SketchKind::CountMin ? 0 : -limit_;
  std::int64_t next;
  if (__builtin_add_overflow(cell, delta, &next)) {
    next = delta > 0 ? limit_ : floor;
    ++saturations_;
  } else if (next > limit_) {
    next = limit_;
    ++saturations_;
  } else if (next < floor) {
    next = floor;
    ++saturations_;
  }
  cell = next;
}

void SketchInstance::update(const FlowKey& key, std::int64_t weight) {
  check_scheme(key);
  for (std::size_t r = 0; r < config_.rows; ++r) add(r, key, weight);
}

void SketchInstance::update_row(std::size_t row, const FlowKey& key,
                                std::int64_t weight) {
  check_scheme(key);
  if (row >= config_.rows) throw std::out_of_range("sketch row out of range");
  add(row, key, weight);
}

std::int64_t SketchInstance::query(const FlowKey& key) const {
  check_scheme(key);
  if (config_.kind == SketchKind::CountMin) {
    std::int64_t best = INT64_MAX;
    for (std::size_t r = 0; r < config_.rows; ++r) {
      best = std::min(best, counters_[r * config_.width + column(r, key)]);
    }
    return best;
  }

  std::vector<std::int64_t> estimates(config_.rows);
  for (std::size_t r = 0; r < config_.rows; ++r) {
    estimates[r] = sign(r, key) * counters_[r * config_.width + column(r, key)];
  }
  const std::size_t mid = estimates.size() / 2;
  std::nth_element(estimates.begin(), estimates.begin() + mid, estimates.end());
  if (estimates.size() % 2 == 1) return estimates[mid];
  const std::int64_t upper = estimates[mid];
  const std::int64_t lower =
      *std::max_element(estimates.begin(), estimates.begin() + mid);
  // Mean of the two middle values, truncated toward zero. Widened so the
  // sum cannot overflow.
  __extension__ using Wide = __int128;
  return static_cast<std::int64_t>((static_cast<Wide>(lower) + upper) / 2);
}

void SketchInstance::clear() noexcept {
  std::fill(counters_.begin(), counters_.end(), 0);
  saturations_ = 0;
}

}  // namespace xplane
