#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xplane/flow_key.hpp"
#include "xplane/packet.hpp"

namespace xplane {

// Immutable, timestamp-ordered packet sequence.
class Trace {
 public:
  Trace() = default;
  // Throws ConfigError if timestamps decrease or a record is shorter than
  // 20 bytes.
  explicit Trace(std::vector<PacketRecord> records);

  const std::vector<PacketRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::uint64_t duration_us() const noexcept;

  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<PacketRecord> records_;
};

inline constexpr std::string_view kTraceCsvHeader =
    "ts_us,src_ip,dst_ip,src_port,dst_port,proto,len_bytes";

// Canonical CSV: the header line, then one record per LF-terminated line.
// CRLF input and a missing final newline are tolerated.
Trace parse_trace(std::istream& in);
Trace parse_trace(const std::filesystem::path& path);
void write_trace(std::ostream& out, const Trace& trace);
// Appends one CSV line (with newline) for `record`.
void format_record(std::string& buf, const PacketRecord& record);
void write_trace(const std::filesystem::path& path, const Trace& trace);

std::string format_ipv4(std::uint32_t addr);
std::optional<std::uint32_t> parse_ipv4(std::string_view text);

struct SyntheticSpec {
  double rate_pps = 1000.0;
  double duration_s = 1.0;
  std::uint32_t flow_count = 1000;
  double zipf_s = 1.1;
  std::uint64_t seed = 1;

  void validate() const;
  std::uint64_t packet_count() const;
};

// Streaming generator. Arrivals are evenly spaced at 1/rate_pps; the flow of
// each packet is drawn Zipf(zipf_s) over flow_count distinct 5-tuples that
// are themselves derived from the seed.
class TraceGenerator {
 public:
  explicit TraceGenerator(const SyntheticSpec& spec);

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t emitted() const noexcept { return next_; }
  bool done() const noexcept { return next_ >= total_; }
  // Requires !done().
  PacketRecord next();

  const std::vector<PacketRecord>& flows() const noexcept { return flows_; }

 private:
  std::uint32_t draw_flow();

  SyntheticSpec spec_;
  std::uint64_t total_;
  std::uint64_t next_ = 0;
  std::mt19937_64 rng_;
  std::vector<PacketRecord> flows_;
  std::vector<double> cdf_;
};

inline constexpr std::uint64_t kDefaultMaxRecords = 64'000'000;

// Materializes a TraceGenerator. Throws ConfigError when the trace would
// hold more than `max_records` records.
Trace generate(const SyntheticSpec& spec,
               std::uint64_t max_records = kDefaultMaxRecords);

struct TraceStats {
  std::uint64_t packet_count = 0;
  std::uint64_t duration_us = 0;
  double avg_pps = 0.0;
  // (scheme id, distinct key count), in request order.
  std::vector<std::pair<int, std::uint64_t>> distinct_keys;
};

// avg_pps = packet_count / duration; a zero-duration trace reports
// avg_pps = packet_count. Throws ConfigError on an empty trace.
TraceStats stats(const Trace& trace, std::span<const FlowKeyScheme> schemes = {});

}  // namespace xplane
