#include "xplane/platform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "xplane/error.hpp"

namespace xplane {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive");
  }
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

}  // namespace

void AsicModel::validate() const {
  require_positive(stages, "asic.stages");
  require_positive(sram_bits_per_stage, "asic.sram_bits_per_stage");
  require_positive(hash_units_per_stage, "asic.hash_units_per_stage");
  require_positive(stateful_alus_per_stage, "asic.stateful_alus_per_stage");
  require_positive(pps_capacity, "asic.pps_capacity");
  require_positive(cost_usd, "asic.cost_usd");
}

void PimModel::validate() const {
  require_positive(banks, "pim.banks");
  require_positive(per_bank_update_rate, "pim.per_bank_update_rate");
  require_positive(total_mem_bits, "pim.total_mem_bits");
  require_positive(scratchpad_bytes, "pim.scratchpad_bytes");
  require_positive(mem_bandwidth_Bps, "pim.mem_bandwidth_Bps");
  require_positive(cost_usd, "pim.cost_usd");
  if (scratchpad_bytes > total_mem_bits / 8) {
    throw ConfigError("pim.scratchpad_bytes exceeds total memory");
  }
}

void FpgaModel::validate() const {
  require_positive(dsp_total, "fpga.dsp_total");
  require_positive(onchip_mem_bits, "fpga.onchip_mem_bits");
  require_positive(proc_bandwidth_Bps, "fpga.proc_bandwidth_Bps");
  require_positive(dsp_fraction_per_hash_engine, "fpga.dsp_fraction_per_hash_engine");
  require_positive(cost_usd, "fpga.cost_usd");
}

void InterconnectModel::validate() const {
  require_positive(bandwidth_Bps, "interconnect.bandwidth_Bps");
  if (!(latency_s >= 0)) throw ConfigError("interconnect.latency_s must be >= 0");
  if (!(efficiency > 0 && efficiency <= 1)) {
    throw ConfigError("interconnect.efficiency must be in (0, 1]");
  }
  if (!(cost_usd >= 0)) throw ConfigError("interconnect.cost_usd must be >= 0");
}

std::string_view device_type(const ExternalDevice& device) noexcept {
  return std::holds_alternative<PimModel>(device) ? "pim" : "fpga";
}

double device_cost(const ExternalDevice& device) noexcept {
  return std::visit([](const auto& d) { return d.cost_usd; }, device);
}

std::string_view to_string(InterconnectKind kind) noexcept {
  switch (kind) {
    case InterconnectKind::OnChip: return "OnChip";
    case InterconnectKind::OffChipOnChassis: return "OffChipOnChassis";
    case InterconnectKind::OffChassis: return "OffChassis";
  }
  return "?";
}

std::string_view to_string(Extensibility e) noexcept {
  switch (e) {
    case Extensibility::Low: return "Low";
    case Extensibility::Medium: return "Medium";
    case Extensibility::High: return "High";
  }
  return "?";
}

InterconnectKind parse_interconnect_kind(std::string_view name) {
  for (auto k : {InterconnectKind::OnChip, InterconnectKind::OffChipOnChassis,
                 InterconnectKind::OffChassis}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown interconnect kind '" + std::string(name) + "'");
}

InterconnectModel interconnect_defaults(InterconnectKind kind) {
  InterconnectModel m;
  m.kind = kind;
  switch (kind) {
    case InterconnectKind::OnChip:
      m.bandwidth_Bps = 160.0e9;
      m.latency_s = 12.0e-12;
      m.efficiency = 1.0;
      break;
    case InterconnectKind::OffChipOnChassis:
      m.bandwidth_Bps = 16.0e9;
      m.latency_s = 1.0e-6;
      m.efficiency = 0.9;
      break;
    case InterconnectKind::OffChassis:
      m.bandwidth_Bps = 12.5e9;
      m.latency_s = 10.0e-6;
      m.efficiency = 0.9;
      break;
  }
  return m;
}

std::string_view to_string(Capability c) noexcept {
  return c == Capability::CounterUpdate ? "CounterUpdate" : "PriorityQueue";
}

Capability parse_capability(std::string_view name) {
  if (name == "CounterUpdate") return Capability::CounterUpdate;
  if (name == "PriorityQueue") return Capability::PriorityQueue;
  throw ConfigError("unknown capability '" + std::string(name) + "'");
}

double Platform::cost_usd() const noexcept {
  double c = asic.cost_usd;
  if (external) c += device_cost(*external);
  if (interconnect) c += interconnect->cost_usd;
  return c;
}

bool Platform::supports(Capability c) const noexcept {
  // Match-action pipelines update counters but cannot host a heap.
  if (c == Capability::CounterUpdate) return true;
  return external.has_value();
}

void Platform::validate() const {
  if (name.empty()) throw ConfigError("platform without a name");
  if (external.has_value() != interconnect.has_value()) {
    throw ConfigError("platform '" + name +
                      "': an external device requires an interconnect and vice versa");
  }
  asic.validate();
  if (external) std::visit([](const auto& d) { d.validate(); }, *external);
  if (interconnect) interconnect->validate();
}

double counter_update_rate(std::span<const SketchConfig> configs, double pps) {
  if (!(pps > 0)) throw std::invalid_argument("pps must be positive");
  std::uint64_t rows = 0;
  for (const SketchConfig& c : configs) rows += c.rows;
  return static_cast<double>(rows) * pps;
}

double update_bandwidth(double updates_per_s, double counter_bytes, double rw_ops) {
  require_non_negative(updates_per_s, "update rate");
  require_non_negative(counter_bytes, "counter_bytes");
  require_non_negative(rw_ops, "rw_ops");
  return updates_per_s * counter_bytes * rw_ops;
}

std::uint64_t sketch_footprint(std::span<const SketchConfig> configs) {
  std::uint64_t bits = 0;
  for (const SketchConfig& c : configs) bits += c.footprint_bits();
  return bits;
}

std::uint64_t hh_footprint(std::uint64_t k, std::uint64_t key_bytes,
                           std::uint64_t counter_bytes, std::uint64_t slots_per_entry) {
  return k * (key_bytes + counter_bytes) * slots_per_entry;
}

double hh_bandwidth(double pps, double bytes_per_access) {
  require_non_negative(pps, "pps");
  require_non_negative(bytes_per_access, "bytes_per_access");
  return pps * bytes_per_access;
}

DemandProfile demand_profile(std::span<const SketchConfig> configs, double pps,
                             const DemandParams& params) {
  DemandProfile d;
  d.counter_updates_per_s = counter_update_rate(configs, pps);
  d.update_bandwidth_Bps =
      update_bandwidth(d.counter_updates_per_s, params.counter_bytes, params.rw_ops);
  d.counter_footprint_bits = sketch_footprint(configs);
  d.hh_footprint_bytes = hh_footprint(params.hh_k, params.hh_key_bytes,
                                      params.hh_counter_bytes, params.hh_slots);
  d.hh_total_footprint_bytes = d.hh_footprint_bytes * configs.size();
  d.hh_bandwidth_Bps = hh_bandwidth(pps, params.hh_bytes_per_access);
  return d;
}

std::string_view to_string(AsicResource r) noexcept {
  switch (r) {
    case AsicResource::None: return "none";
    case AsicResource::Stages: return "stages";
    case AsicResource::Sram: return "sram";
    case AsicResource::HashUnits: return "hash_units";
    case AsicResource::StatefulAlus: return "stateful_alus";
  }
  return "?";
}

std::uint32_t rows_per_stage(const SketchConfig& config, const AsicModel& asic) noexcept {
  const double by_sram =
      std::floor(asic.sram_bits_per_stage / static_cast<double>(config.row_bits()));
  const double limit = std::min<double>(
      {by_sram, static_cast<double>(asic.hash_units_per_stage),
       static_cast<double>(asic.stateful_alus_per_stage)});
  return static_cast<std::uint32_t>(std::max(0.0, limit));
}

FitReport asic_fit(std::span<const SketchConfig> configs, const AsicModel& asic) {
  FitReport report;
  report.stages.resize(asic.stages);
  report.row_stages.resize(configs.size());

  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (configs[a].row_bits() != configs[b].row_bits()) {
      return configs[a].row_bits() > configs[b].row_bits();
    }
    return configs[a].rows > configs[b].rows;
  });

  auto blocking = [&](const StageUsage& s, double row_bits) {
    if (s.sram_bits + row_bits > asic.sram_bits_per_stage) return AsicResource::Sram;
    if (s.hash_units + 1 > asic.hash_units_per_stage) return AsicResource::HashUnits;
    if (s.stateful_alus + 1 > asic.stateful_alus_per_stage) {
      return AsicResource::StatefulAlus;
    }
    return AsicResource::None;
  };

  for (std::size_t idx : order) {
    const SketchConfig& c = configs[idx];
    const double row_bits = static_cast<double>(c.row_bits());
    auto fail = [&](AsicResource r) {
      report.feasible = false;
      report.binding_resource = r;
      report.failed_instance = idx;
      return report;
    };
    if (c.rows > asic.stages) return fail(AsicResource::Stages);

    std::vector<bool> used(asic.stages, false);
    std::vector<std::uint32_t> placed;
    for (std::uint32_t r = 0; r < c.rows; ++r) {
      AsicResource first_block = AsicResource::Stages;
      std::optional<std::uint32_t> chosen;
      for (std::uint32_t s = 0; s < asic.stages; ++s) {
        if (used[s]) continue;
        const AsicResource b = blocking(report.stages[s], row_bits);
        if (b == AsicResource::None) {
          chosen = s;
          break;
        }
        if (first_block == AsicResource::Stages) first_block = b;
      }
      if (!chosen) {
        // Roll back this instance's rows so the report reflects only
        // fully placed instances.
        for (std::uint32_t s : placed) {
          StageUsage& u = report.stages[s];
          u.sram_bits -= row_bits;
          --u.hash_units;
          --u.stateful_alus;
          --u.rows;
        }
        return fail(first_block);
      }
      used[*chosen] = true;
      placed.push_back(*chosen);
      StageUsage& u = report.stages[*chosen];
      u.sram_bits += row_bits;
      ++u.hash_units;
      ++u.stateful_alus;
      ++u.rows;
    }
    report.row_stages[idx] = std::move(placed);
  }
  return report;
}

CapacityProfile device_capacity(const ExternalDevice& device, double counter_bytes,
                                double rw_ops) {
  if (const auto* pim = std::get_if<PimModel>(&device)) {
    return {pim->banks * pim->per_bank_update_rate, pim->mem_bandwidth_Bps,
            pim->total_mem_bits};
  }
  const auto& fpga = std::get<FpgaModel>(device);
  const double per_update = counter_bytes * rw_ops;
  if (!(per_update > 0)) throw std::invalid_argument("bytes per update must be positive");
  return {fpga.proc_bandwidth_Bps / per_update, fpga.proc_bandwidth_Bps,
          fpga.onchip_mem_bits};
}

FpgaCheck fpga_check(const FpgaModel& fpga, std::span<const SketchConfig> configs,
                     std::uint64_t hh_bytes, double required_Bps) {
  FpgaCheck c;
  c.demand_bits = static_cast<double>(sketch_footprint(configs)) +
                  static_cast<double>(hh_bytes) * 8.0;
  c.capacity_bits = fpga.onchip_mem_bits;
  c.memory_fits = c.demand_bits <= c.capacity_bits;
  c.required_Bps = required_Bps;
  c.available_Bps = fpga.proc_bandwidth_Bps;
  c.bandwidth_fits = required_Bps <= fpga.proc_bandwidth_Bps;
  c.headroom_ratio = required_Bps > 0 ? fpga.proc_bandwidth_Bps / required_Bps
                                      : std::numeric_limits<double>::infinity();
  std::uint64_t rows = 0;
  for (const SketchConfig& s : configs) rows += s.rows;
  c.dsp_fraction = static_cast<double>(rows) * fpga.dsp_fraction_per_hash_engine;
  c.dsp_fits = c.dsp_fraction <= 1.0;
  return c;
}

}  // namespace xplane
