#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xplane/flow_key.hpp"
#include "xplane/heavy_hitters.hpp"
#include "xplane/packet.hpp"
#include "xplane/sketch.hpp"

namespace xplane {

enum class WeightMode : std::uint8_t { Packets, Bytes };

struct UpdateStats {
  std::uint64_t counter_updates = 0;
  // Offers that changed a tracker's key set (insertions and evictions).
  std::uint64_t hh_accepted = 0;
  // Offers that changed the estimate of an already-tracked key.
  std::uint64_t hh_refreshed = 0;

  UpdateStats& operator+=(const UpdateStats& o) noexcept {
    counter_updates += o.counter_updates;
    hh_accepted += o.hh_accepted;
    hh_refreshed += o.hh_refreshed;
    return *this;
  }
  friend bool operator==(const UpdateStats&, const UpdateStats&) = default;
};

// One sketch with its own top-K tracker.
struct MonitorSlot {
  FlowKeyScheme scheme;
  SketchInstance sketch;
  HeavyHitterTracker tracker;
};

// Multi-dimensional monitor: one sketch instance per flow-key scheme, all
// fed by the same packet stream. Single writer; no internal locking.
class MultiDimMonitor {
 public:
  // `configs[i].scheme_id` must name a scheme in `schemes`; each scheme may
  // back at most one instance.
  MultiDimMonitor(const std::vector<FlowKeyScheme>& schemes,
                  const std::vector<SketchConfig>& configs, std::size_t hh_k = 100,
                  WeightMode mode = WeightMode::Packets);

  std::size_t dimension() const noexcept { return slots_.size(); }
  WeightMode weight_mode() const noexcept { return mode_; }
  const MonitorSlot& slot(std::size_t i) const { return slots_.at(i); }
  const std::vector<MonitorSlot>& slots() const noexcept { return slots_; }
  std::size_t rows_per_packet() const noexcept { return rows_per_packet_; }

  UpdateStats update(const PacketRecord& packet) {
    return update_filtered(packet, [](std::size_t, std::size_t) { return true; });
  }

  // Like update(), but row r of instance i is only written when
  // keep(i, r) is true. The tracker is still offered the resulting estimate.
  template <typename Keep>
  UpdateStats update_filtered(const PacketRecord& packet, Keep&& keep) {
    UpdateStats stats;
    const std::int64_t weight =
        mode_ == WeightMode::Bytes ? std::int64_t{packet.len_bytes} : 1;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      MonitorSlot& s = slots_[i];
      const FlowKey key = extract_key(packet, s.scheme);
      const std::size_t rows = s.sketch.config().rows;
      for (std::size_t r = 0; r < rows; ++r) {
        if (keep(i, r)) {
          s.sketch.update_row(r, key, weight);
          ++stats.counter_updates;
        }
      }
      const std::int64_t est = s.sketch.query(key);
      const OfferResult res = s.tracker.offer(key, est < 0 ? 0 : est);
      if (changes_membership(res)) {
        ++stats.hh_accepted;
      } else if (res == OfferResult::Updated) {
        ++stats.hh_refreshed;
      }
    }
    return stats;
  }

  friend bool operator==(const MultiDimMonitor& a, const MultiDimMonitor& b);

 private:
  std::vector<MonitorSlot> slots_;
  WeightMode mode_;
  std::size_t rows_per_packet_ = 0;
};

}  // namespace xplane
