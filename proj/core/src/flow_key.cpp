#include "xplane/flow_key.hpp"

#include <algorithm>
#include <stdexcept>

#include "xplane/hash.hpp"

namespace xplane {

namespace {

constexpr std::array<std::string_view, 5> kFieldNames = {
    "src_ip", "dst_ip", "src_port", "dst_port", "proto"};

void put_be(std::uint8_t* out, std::uint64_t value, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    out[i] = static_cast<std::uint8_t>(value >> (8 * (width - 1 - i)));
  }
}

}  // namespace

std::string_view to_string(FlowField f) noexcept {
  return kFieldNames[static_cast<std::size_t>(f)];
}

FlowField parse_flow_field(std::string_view name) {
  for (std::size_t i = 0; i < kFieldNames.size(); ++i) {
    if (kFieldNames[i] == name) return static_cast<FlowField>(i);
  }
  throw std::invalid_argument("unknown flow field '" + std::string(name) + "'");
}

FlowKeyScheme::FlowKeyScheme(int id, std::vector<FlowField> fields)
    : id_(id), fields_(std::move(fields)) {
  if (fields_.empty()) {
    throw std::invalid_argument("flow key scheme " + std::to_string(id_) +
                                " selects no fields");
  }
  for (std::size_t i = 1; i < fields_.size(); ++i) {
    if (fields_[i - 1] >= fields_[i]) {
      throw std::invalid_argument(
          "flow key scheme " + std::to_string(id_) +
          ": fields must be unique and in canonical order "
          "(src_ip, dst_ip, src_port, dst_port, proto)");
    }
  }
  for (FlowField f : fields_) key_width_ += field_width(f);
}

FlowKeyScheme FlowKeyScheme::five_tuple(int id) {
  return FlowKeyScheme(id, {FlowField::SrcIp, FlowField::DstIp, FlowField::SrcPort,
                            FlowField::DstPort, FlowField::Proto});
}

std::string FlowKeyScheme::describe() const {
  std::string out;
  for (FlowField f : fields_) {
    if (!out.empty()) out += '+';
    out += to_string(f);
  }
  return out;
}

FlowKey::FlowKey(int scheme_id, std::span<const std::uint8_t> bytes)
    : scheme_id_(scheme_id) {
  if (bytes.size() > kMaxBytes) {
    throw std::invalid_argument("flow key longer than 13 bytes");
  }
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
  size_ = static_cast<std::uint8_t>(bytes.size());
}

std::string FlowKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * size_);
  for (std::uint8_t b : bytes()) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

std::strong_ordering operator<=>(const FlowKey& a, const FlowKey& b) noexcept {
  if (auto c = a.scheme_id_ <=> b.scheme_id_; c != 0) return c;
  auto ab = a.bytes();
  auto bb = b.bytes();
  return std::lexicographical_compare_three_way(ab.begin(), ab.end(), bb.begin(),
                                                bb.end());
}

std::size_t FlowKeyHash::operator()(const FlowKey& k) const noexcept {
  return static_cast<std::size_t>(
      hash_bytes(k.bytes(), static_cast<std::uint64_t>(k.scheme_id_)));
}

FlowKey extract_key(const PacketRecord& packet, const FlowKeyScheme& scheme) {
  FlowKey key;
  key.scheme_id_ = scheme.id();
  std::uint8_t* out = key.bytes_.data();
  for (FlowField f : scheme.fields()) {
    std::uint64_t value = 0;
    switch (f) {
      case FlowField::SrcIp: value = packet.src_ip; break;
      case FlowField::DstIp: value = packet.dst_ip; break;
      case FlowField::SrcPort: value = packet.src_port; break;
      case FlowField::DstPort: value = packet.dst_port; break;
      case FlowField::Proto: value = packet.proto; break;
    }
    put_be(out, value, field_width(f));
    out += field_width(f);
  }
  key.size_ = static_cast<std::uint8_t>(scheme.key_width());
  return key;
}

}  // namespace xplane
