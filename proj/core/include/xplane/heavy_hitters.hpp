#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "xplane/flow_key.hpp"

namespace xplane {

enum class OfferResult : std::uint8_t {
  Rejected,  // not tracked and not larger than the current minimum
  Unchanged, // tracked, same estimate
  Updated,   // tracked, estimate changed in place
  Inserted,  // new key, tracker had room
  Replaced,  // new key, evicted the minimum
};

// True when the tracked key set changed.
constexpr bool changes_membership(OfferResult r) noexcept {
  return r == OfferResult::Inserted || r == OfferResult::Replaced;
}

// Top-K tracker: a binary min-heap on estimated count with a position index
// keyed by flow key. Ties against the current minimum never evict.
class HeavyHitterTracker {
 public:
  struct Entry {
    FlowKey key;
    std::int64_t estimate = 0;
  };

  explicit HeavyHitterTracker(std::size_t capacity = 100);

  OfferResult offer(const FlowKey& key, std::int64_t estimate);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return heap_.size(); }
  bool full() const noexcept { return heap_.size() == capacity_; }
  bool contains(const FlowKey& key) const { return index_.contains(key); }
  std::optional<std::int64_t> estimate(const FlowKey& key) const;
  // Smallest tracked estimate; requires a non-empty tracker.
  std::int64_t min_estimate() const;

  // Tracked entries sorted by estimate descending, then key ascending.
  std::vector<Entry> sorted() const;

  // Raw heap, for invariant checks.
  const std::vector<Entry>& heap() const noexcept { return heap_; }
  bool check_invariants() const;

  friend bool operator==(const HeavyHitterTracker& a, const HeavyHitterTracker& b);

 private:
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  void swap_slots(std::size_t a, std::size_t b);

  std::size_t capacity_;
  std::vector<Entry> heap_;
  std::unordered_map<FlowKey, std::size_t, FlowKeyHash> index_;
};

}  // namespace xplane
