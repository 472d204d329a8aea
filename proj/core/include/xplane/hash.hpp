#pragma once

#include <cstdint>
#include <span>

namespace xplane {

// Stafford variant 13 of the MurmurHash3 64-bit finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Seed for row `row` of a sketch seeded with `seed`.
constexpr std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) noexcept {
  return mix64(seed ^ mix64(row + 0x9e3779b97f4a7c15ULL));
}

// Seeded hash of a short byte string. Bytes are consumed in little-endian
// 8-byte words; the length is folded into the initial state so that
// zero-padded prefixes do not collide.
inline std::uint64_t hash_bytes(std::span<const std::uint8_t> bytes,
                                std::uint64_t seed) noexcept {
  std::uint64_t h = seed ^ (bytes.size() * 0x9e3779b97f4a7c15ULL);
  std::size_t i = 0;
  while (i < bytes.size()) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 8 && i < bytes.size(); ++b, ++i) {
      word |= static_cast<std::uint64_t>(bytes[i]) << (8 * b);
    }
    h = mix64(h ^ word);
  }
  return mix64(h);
}

}  // namespace xplane
