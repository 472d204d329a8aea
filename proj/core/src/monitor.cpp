#include "xplane/monitor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace xplane {

MultiDimMonitor::MultiDimMonitor(const std::vector<FlowKeyScheme>& schemes,
                                 const std::vector<SketchConfig>& configs,
                                 std::size_t hh_k, WeightMode mode)
    : mode_(mode) {
  if (configs.empty()) {
    throw std::invalid_argument("a monitor needs at least one sketch instance");
  }
  std::set<int> seen;
  for (const SketchConfig& c : configs) {
    auto it = std::find_if(schemes.begin(), schemes.end(),
                           [&](const FlowKeyScheme& s) { return s.id() == c.scheme_id; });
    if (it == schemes.end()) {
      throw std::invalid_argument("sketch refers to unknown flow key scheme " +
                                  std::to_string(c.scheme_id));
    }
    if (!seen.insert(c.scheme_id).second) {
      throw std::invalid_argument("flow key scheme " + std::to_string(c.scheme_id) +
                                  " backs more than one instance");
    }
    slots_.push_back({*it, SketchInstance(c), HeavyHitterTracker(hh_k)});
    rows_per_packet_ += c.rows;
  }
}

bool operator==(const MultiDimMonitor& a, const MultiDimMonitor& b) {
  if (a.slots_.size() != b.slots_.size() || a.mode_ != b.mode_) return false;
  for (std::size_t i = 0; i < a.slots_.size(); ++i) {
    if (!(a.slots_[i].scheme == b.slots_[i].scheme) ||
        !(a.slots_[i].sketch == b.slots_[i].sketch) ||
        !(a.slots_[i].tracker == b.slots_[i].tracker)) {
      return false;
    }
  }
  return true;
}

}  // namespace xplane
