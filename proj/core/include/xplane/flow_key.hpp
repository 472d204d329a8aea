#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xplane/packet.hpp"

namespace xplane {

// Header fields a flow key may select, in canonical order.
enum class FlowField : std::uint8_t { SrcIp, DstIp, SrcPort, DstPort, Proto };

constexpr std::size_t field_width(FlowField f) noexcept {
  switch (f) {
    case FlowField::SrcIp:
    case FlowField::DstIp:
      return 4;
    case FlowField::SrcPort:
    case FlowField::DstPort:
      return 2;
    case FlowField::Proto:
      return 1;
  }
  return 0;
}

std::string_view to_string(FlowField f) noexcept;
// Accepts the snake_case names used in app files ("src_ip", ...).
FlowField parse_flow_field(std::string_view name);

// Ordered, duplicate-free selection of header fields identified by a small
// integer id.
class FlowKeyScheme {
 public:
  FlowKeyScheme(int id, std::vector<FlowField> fields);

  static FlowKeyScheme five_tuple(int id);

  int id() const noexcept { return id_; }
  const std::vector<FlowField>& fields() const noexcept { return fields_; }
  std::size_t key_width() const noexcept { return key_width_; }
  std::string describe() const;

  friend bool operator==(const FlowKeyScheme&, const FlowKeyScheme&) = default;

 private:
  int id_;
  std::vector<FlowField> fields_;
  std::size_t key_width_ = 0;
};

// Big-endian concatenation of the selected header fields.
class FlowKey {
 public:
  static constexpr std::size_t kMaxBytes = 13;

  FlowKey() = default;
  FlowKey(int scheme_id, std::span<const std::uint8_t> bytes);

  int scheme_id() const noexcept { return scheme_id_; }
  std::span<const std::uint8_t> bytes() const noexcept {
    return {bytes_.data(), size_};
  }
  std::size_t size() const noexcept { return size_; }
  std::string hex() const;

  friend bool operator==(const FlowKey& a, const FlowKey& b) noexcept {
    return a.scheme_id_ == b.scheme_id_ && a.size_ == b.size_ &&
           a.bytes_ == b.bytes_;
  }
  friend std::strong_ordering operator<=>(const FlowKey& a,
                                          const FlowKey& b) noexcept;

 private:
  friend struct FlowKeyHash;
  friend FlowKey extract_key(const PacketRecord&, const FlowKeyScheme&);

  int scheme_id_ = 0;
  std::array<std::uint8_t, kMaxBytes> bytes_{};
  std::uint8_t size_ = 0;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const noexcept;
};

FlowKey extract_key(const PacketRecord& packet, const FlowKeyScheme& scheme);

}  // namespace xplane
