#include "xplane/heavy_hitters.hpp"

#include <algorithm>
#include <stdexcept>

namespace xplane {

HeavyHitterTracker::HeavyHitterTracker(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("tracker capacity must be >= 1");
  heap_.reserve(capacity_);
  index_.reserve(capacity_ * 2);
}

OfferResult HeavyHitterTracker::offer(const FlowKey& key, std::int64_t estimate) {
  if (estimate < 0) throw std::invalid_argument("negative heavy-hitter estimate");

  if (auto it = index_.find(key); it != index_.end()) {
    const std::size_t pos = it->second;
    const std::int64_t old = heap_[pos].estimate;
    if (old == estimate) return OfferResult::Unchanged;
    heap_[pos].estimate = estimate;
    if (estimate < old) {
      sift_up(pos);
    } else {
      sift_down(pos);
    }
    return OfferResult::Updated;
  }

  if (heap_.size() < capacity_) {
    heap_.push_back({key, estimate});
    index_.emplace(key, heap_.size() - 1);
    sift_up(heap_.size() - 1);
    return OfferResult::Inserted;
  }

  if (estimate <= heap_.front().estimate) return OfferResult::Rejected;
  index_.erase(heap_.front().key);
  heap_.front() = {key, estimate};
  index_.emplace(key, 0);
  sift_down(0);
  return OfferResult::Replaced;
}

std::optional<std::int64_t> HeavyHitterTracker::estimate(const FlowKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return heap_[it->second].estimate;
}

std::int64_t HeavyHitterTracker::min_estimate() const {
  if (heap_.empty()) throw std::logic_error("empty heavy-hitter tracker");
  return heap_.front().estimate;
}

std::vector<HeavyHitterTracker::Entry> HeavyHitterTracker::sorted() const {
  std::vector<Entry> out = heap_;
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.key < b.key;
  });
  return out;
}

bool HeavyHitterTracker::check_invariants() const {
  if (heap_.size() > capacity_ || index_.size() != heap_.size()) return false;
  for (std::size_t i = 0; i < heap_.size(); ++i) {
    auto it = index_.find(heap_[i].key);
    if (it == index_.end() || it->second != i) return false;
    if (i > 0 && heap_[(i - 1) / 2].estimate > heap_[i].estimate) return false;
  }
  return true;
}

bool operator==(const HeavyHitterTracker& a, const HeavyHitterTracker& b) {
  if (a.capacity_ != b.capacity_ || a.heap_.size() != b.heap_.size()) return false;
  for (std::size_t i = 0; i < a.heap_.size(); ++i) {
    if (a.heap_[i].key != b.heap_[i].key ||
        a.heap_[i].estimate != b.heap_[i].estimate) {
      return false;
    }
  }
  return true;
}

void HeavyHitterTracker::swap_slots(std::size_t a, std::size_t b) {
  std::swap(heap_[a], heap_[b]);
  index_[heap_[a].key] = a;
  index_[heap_[b].key] = b;
}

void HeavyHitterTracker::sift_up(std::size_t i) {
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (heap_[parent].estimate <= heap_[i].estimate) break;
    swap_slots(parent, i);
    i = parent;
  }
}

void HeavyHitterTracker::sift_down(std::size_t i) {
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t smallest = i;
    const std::size_t l = 2 * i + 1;
    const std::size_t r = l + 1;
    if (l < n && heap_[l].estimate < heap_[smallest].estimate) smallest = l;
    if (r < n && heap_[r].estimate < heap_[smallest].estimate) smallest = r;
    if (smallest == i) return;
    swap_slots(i, smallest);
    i = smallest;
  }
}

}  // namespace xplane
