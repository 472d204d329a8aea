#pragma once

#include <cstdint>

namespace xplane {

// One packet header observation. Addresses are host-order integers.
struct PacketRecord {
  std::uint64_t ts_us = 0;
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t proto = 0;
  std::uint16_t len_bytes = 20;

  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

inline constexpr std::uint16_t kMinPacketBytes = 20;

}  // namespace xplane
