#include <doctest.h>

#include <set>
#include <stdexcept>

#include "xplane/flow_key.hpp"
#include "xplane/hash.hpp"
#include "xplane/sketch.hpp"

using namespace xplane;

namespace {

PacketRecord sample_packet() {
  PacketRecord p;
  p.src_ip = 0x0a000001;  // 10.0.0.1
  p.dst_ip = 0xc0a80102;  // 192.168.1.2
  p.src_port = 1024;
  p.dst_port = 80;
  p.proto = 6;
  p.len_bytes = 64;
  return p;
}

}  // namespace

TEST_SUITE("flow_key") {
  TEST_CASE("mix64 matches the SplitMix64 reference stream") {
    // SplitMix64 seeded with 0 emits mix64(k * golden) for k = 1, 2, ...
    CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
    CHECK(mix64(0x3c6ef372fe94f82aULL) == 0x6e789e6aa1b965f4ULL);
    CHECK(mix64(0) == 0);
  }

  TEST_CASE("hash_bytes is pinned") {
    const std::uint8_t k5[] = {10, 0, 0, 1, 192, 168, 1, 2, 0x04, 0x00, 0x00, 0x50, 6};
    CHECK(hash_bytes(k5, 7) == 0xfaf532d6aa7f3f1bULL);
  }

  TEST_CASE("length is folded into the hash") {
    const std::uint8_t a[] = {1, 0};
    const std::uint8_t b[] = {1};
    CHECK(hash_bytes(a, 3) != hash_bytes(b, 3));
  }

  TEST_CASE("extract_key writes fields big-endian in canonical order") {
    const PacketRecord p = sample_packet();
    const FlowKey k = extract_key(p, FlowKeyScheme::five_tuple(9));
    const std::vector<std::uint8_t> want = {10, 0, 0, 1, 192, 168, 1, 2, 0x04, 0x00, 0x00, 0x50, 6};
    REQUIRE(k.size() == 13);
    CHECK(std::vector<std::uint8_t>(k.bytes().begin(), k.bytes().end()) == want);
    CHECK(k.scheme_id() == 9);
    CHECK(k.hex() == "0a000001c0a8010204000050" "06");

    const FlowKey sp = extract_key(p, FlowKeyScheme(3, {FlowField::SrcIp, FlowField::SrcPort}));
    CHECK(sp.size() == 6);
    CHECK(sp.hex() == "0a0000010400");
  }

  TEST_CASE("scheme validation") {
    CHECK_THROWS_AS(FlowKeyScheme(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(FlowKeyScheme(0, {FlowField::DstIp, FlowField::SrcIp}), std::invalid_argument);
    CHECK_THROWS_AS(FlowKeyScheme(0, {FlowField::SrcIp, FlowField::SrcIp}), std::invalid_argument);
    const FlowKeyScheme s(1, {FlowField::SrcIp, FlowField::DstIp, FlowField::Proto});
    CHECK(s.key_width() == 9);
    CHECK(s.describe() == "src_ip+dst_ip+proto");
    CHECK(FlowKeyScheme::five_tuple(0).key_width() == 13);
  }

  TEST_CASE("field names round-trip") {
    for (FlowField f : {FlowField::SrcIp, FlowField::DstIp, FlowField::SrcPort,
                        FlowField::DstPort, FlowField::Proto}) {
      CHECK(parse_flow_field(to_string(f)) == f);
    }
    CHECK_THROWS_AS(parse_flow_field("ttl"), std::invalid_argument);
  }

  TEST_CASE("keys of different schemes never compare equal") {
    const PacketRecord p = sample_packet();
    const FlowKey a = extract_key(p, FlowKeyScheme(0, {FlowField::SrcIp}));
    const FlowKey b = extract_key(p, FlowKeyScheme(1, {FlowField::SrcIp}));
    CHECK(a != b);
    CHECK(FlowKeyHash{}(a) != FlowKeyHash{}(b));
  }

  TEST_CASE("row hashing is pinned") {
    // Reference values computed independently from the hash definition.
    SketchConfig cfg;
    cfg.kind = SketchKind::CountSketch;
    cfg.seed = 42;
    const SketchInstance s(cfg);
    const FlowKey k = extract_key(sample_packet(), FlowKeyScheme(0, {FlowField::SrcIp}));
    CHECK(s.column(0, k) == 5848);
    CHECK(s.column(1, k) == 11933);
    CHECK(s.column(2, k) == 26738);
    CHECK(s.sign(0, k) == -1);
    CHECK(s.sign(1, k) == 1);
    CHECK(s.sign(2, k) == -1);
  }
}
