#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xplane/sketch.hpp"

namespace xplane {

// Bytes moved per counter update (one 32-bit counter, load + store).
inline constexpr double kDefaultCounterBytes = 4.0;
inline constexpr double kDefaultRwOps = 2.0;
// Heavy-hitter heap entry: 4-byte key, 4-byte count, two slots per entry.
inline constexpr std::uint64_t kDefaultHhK = 100;
inline constexpr std::uint64_t kDefaultHhKeyBytes = 4;
inline constexpr std::uint64_t kDefaultHhCounterBytes = 4;
inline constexpr std::uint64_t kDefaultHhSlots = 2;
inline constexpr double kDefaultHhBytesPerAccess = 4.0;

struct AsicModel {
  std::uint32_t stages = 10;
  double sram_bits_per_stage = 2.1e6;
  std::uint32_t hash_units_per_stage = 6;
  std::uint32_t stateful_alus_per_stage = 4;
  double pps_capacity = 4.8e9;
  double cost_usd = 12'000;

  void validate() const;
  friend bool operator==(const AsicModel&, const AsicModel&) = default;
};

struct PimModel {
  std::uint32_t banks = 64;
  double per_bank_update_rate = 1.0e6;
  double total_mem_bits = 8.0e9;
  double scratchpad_bytes = 65'536;
  double mem_bandwidth_Bps = 256.0e9;
  double cost_usd = 4'000;

  void validate() const;
  friend bool operator==(const PimModel&, const PimModel&) = default;
};

struct FpgaModel {
  std::uint32_t dsp_total = 6'840;
  double onchip_mem_bits = 350.0e6;
  double proc_bandwidth_Bps = 9.35e9;
  // DSP share consumed by one hash engine (one per sketch row).
  double dsp_fraction_per_hash_engine = 0.005;
  double cost_usd = 9'000;

  void validate() const;
  friend bool operator==(const FpgaModel&, const FpgaModel&) = default;
};

using ExternalDevice = std::variant<PimModel, FpgaModel>;

std::string_view device_type(const ExternalDevice& device) noexcept;
double device_cost(const ExternalDevice& device) noexcept;

enum class InterconnectKind : std::uint8_t { OnChip, OffChipOnChassis, OffChassis };
enum class Extensibility : std::uint8_t { Low, Medium, High };

std::string_view to_string(InterconnectKind kind) noexcept;
std::string_view to_string(Extensibility e) noexcept;
InterconnectKind parse_interconnect_kind(std::string_view name);

constexpr Extensibility extensibility_of(InterconnectKind kind) noexcept {
  switch (kind) {
    case InterconnectKind::OnChip: return Extensibility::Low;
    case InterconnectKind::OffChipOnChassis: return Extensibility::Medium;
    case InterconnectKind::OffChassis: return Extensibility::High;
  }
  return Extensibility::Low;
}

struct InterconnectModel {
  InterconnectKind kind = InterconnectKind::OnChip;
  double bandwidth_Bps = 160.0e9;
  double latency_s = 12.0e-12;
  // Fraction of raw bandwidth left after link framing.
  double efficiency = 1.0;
  double cost_usd = 0.0;

  Extensibility extensibility() const noexcept { return extensibility_of(kind); }
  double effective_bandwidth_Bps() const noexcept { return bandwidth_Bps * efficiency; }
  void validate() const;
  friend bool operator==(const InterconnectModel&, const InterconnectModel&) = default;
};

// Table 1 defaults: on-chip stacking, on-chassis link, and 100 GbE.
InterconnectModel interconnect_defaults(InterconnectKind kind);

enum class Capability : std::uint8_t { CounterUpdate, PriorityQueue };
std::string_view to_string(Capability c) noexcept;
Capability parse_capability(std::string_view name);

struct Platform {
  std::string name;
  AsicModel asic;
  std::optional<ExternalDevice> external;
  std::optional<InterconnectModel> interconnect;

  bool has_external() const noexcept { return external.has_value(); }
  double cost_usd() const noexcept;
  bool supports(Capability c) const noexcept;
  // Throws ConfigError unless external and interconnect are both present or
  // both absent, and every model is valid.
  void validate() const;
  friend bool operator==(const Platform&, const Platform&) = default;
};

// ---------------------------------------------------------------------------
// Demand estimators. All are pure and monotone in every argument.

// Sum of rows over all instances, times the packet rate.
double counter_update_rate(std::span<const SketchConfig> configs, double pps);
double update_bandwidth(double updates_per_s, double counter_bytes = kDefaultCounterBytes,
                        double rw_ops = kDefaultRwOps);
std::uint64_t sketch_footprint(std::span<const SketchConfig> configs);
// k * (key_bytes + counter_bytes) * slots_per_entry
std::uint64_t hh_footprint(std::uint64_t k = kDefaultHhK,
                           std::uint64_t key_bytes = kDefaultHhKeyBytes,
                           std::uint64_t counter_bytes = kDefaultHhCounterBytes,
                           std::uint64_t slots_per_entry = kDefaultHhSlots);
double hh_bandwidth(double pps, double bytes_per_access = kDefaultHhBytesPerAccess);

struct DemandParams {
  double counter_bytes = kDefaultCounterBytes;
  double rw_ops = kDefaultRwOps;
  std::uint64_t hh_k = kDefaultHhK;
  std::uint64_t hh_key_bytes = kDefaultHhKeyBytes;
  std::uint64_t hh_counter_bytes = kDefaultHhCounterBytes;
  std::uint64_t hh_slots = kDefaultHhSlots;
  double hh_bytes_per_access = kDefaultHhBytesPerAccess;

  double message_bytes() const noexcept { return counter_bytes * rw_ops; }
};

struct DemandProfile {
  double counter_updates_per_s = 0;
  double update_bandwidth_Bps = 0;
  std::uint64_t counter_footprint_bits = 0;
  // Footprint of one heavy-hitter queue; the total covers one per instance.
  std::uint64_t hh_footprint_bytes = 0;
  std::uint64_t hh_total_footprint_bytes = 0;
  double hh_bandwidth_Bps = 0;
};

DemandProfile demand_profile(std::span<const SketchConfig> configs, double pps,
                             const DemandParams& params = {});

// ---------------------------------------------------------------------------
// Switch pipeline fit.

enum class AsicResource : std::uint8_t { None, Stages, Sram, HashUnits, StatefulAlus };
std::string_view to_string(AsicResource r) noexcept;

struct StageUsage {
  double sram_bits = 0;
  std::uint32_t hash_units = 0;
  std::uint32_t stateful_alus = 0;
  std::uint32_t rows = 0;
};

struct FitReport {
  bool feasible = true;
  // First exhausted resource; None when feasible.
  AsicResource binding_resource = AsicResource::None;
  // Index (into the input) of the instance that could not be placed.
  std::optional<std::size_t> failed_instance;
  std::vector<StageUsage> stages;
  // Stage index of every row of every placed instance, in input order.
  std::vector<std::vector<std::uint32_t>> row_stages;

  double sram_utilization(std::size_t stage, const AsicModel& asic) const {
    return stages.at(stage).sram_bits / asic.sram_bits_per_stage;
  }
};

// Each sketch row takes one hash unit, one stateful ALU and width*counter_bits
// of SRAM in a single stage; rows of one instance occupy distinct stages.
// Instances are placed first-fit in decreasing order of row size.
FitReport asic_fit(std::span<const SketchConfig> configs, const AsicModel& asic);

// How many rows of `config` one stage can host.
std::uint32_t rows_per_stage(const SketchConfig& config, const AsicModel& asic) noexcept;

// ---------------------------------------------------------------------------
// External device capacity.

struct CapacityProfile {
  double updates_per_s = 0;
  double bytes_per_s = 0;
  double mem_bits = 0;
};

// PIM: banks * per_bank_update_rate. FPGA: processing bandwidth divided by the
// bytes each update moves.
CapacityProfile device_capacity(const ExternalDevice& device,
                                double counter_bytes = kDefaultCounterBytes,
                                double rw_ops = kDefaultRwOps);

struct FpgaCheck {
  double demand_bits = 0;
  double capacity_bits = 0;
  bool memory_fits = false;
  double required_Bps = 0;
  double available_Bps = 0;
  bool bandwidth_fits = false;
  double headroom_ratio = 0;
  double dsp_fraction = 0;
  bool dsp_fits = false;
};

FpgaCheck fpga_check(const FpgaModel& fpga, std::span<const SketchConfig> configs,
                     std::uint64_t hh_bytes, double required_Bps);

}  // namespace xplane
