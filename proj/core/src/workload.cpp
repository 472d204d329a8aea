#include "xplane/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "xplane/error.hpp"

namespace xplane {

Trace::Trace(std::vector<PacketRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].len_bytes < kMinPacketBytes) {
      throw ConfigError("record " + std::to_string(i) + " has len_bytes " +
                        std::to_string(records_[i].len_bytes) + " < 20");
    }
    if (i > 0 && records_[i].ts_us < records_[i - 1].ts_us) {
      throw ConfigError("timestamp decreases from " +
                        std::to_string(records_[i - 1].ts_us) + " to " +
                        std::to_string(records_[i].ts_us) + " at record " +
                        std::to_string(i));
    }
  }
}

std::uint64_t Trace::duration_us() const noexcept {
  if (records_.size() <= 1) return 0;
  return records_.back().ts_us - records_.front().ts_us;
}

std::string format_ipv4(std::uint32_t addr) {
  return std::to_string(addr >> 24) + '.' + std::to_string((addr >> 16) & 0xff) +
         '.' + std::to_string((addr >> 8) & 0xff) + '.' + std::to_string(addr & 0xff);
}

namespace {

template <typename T>
bool parse_uint(std::string_view text, T& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::optional<std::uint32_t> parse_ipv4(std::string_view text) {
  auto parts = split(text, '.');
  if (parts.size() != 4) return std::nullopt;
  std::uint32_t addr = 0;
  for (std::string_view p : parts) {
    unsigned octet = 0;
    if (p.size() > 3 || !parse_uint(p, octet) || octet > 255) return std::nullopt;
    addr = (addr << 8) | octet;
  }
  return addr;
}

Trace parse_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  if (!std::getline(in, line)) throw ParseError(1, "missing header line");
  ++line_no;
  strip_cr(line);
  if (line != kTraceCsvHeader) {
    throw ParseError(1, "expected header '" + std::string(kTraceCsvHeader) + "'");
  }

  std::vector<PacketRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      // Only a trailing blank line is tolerated.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(line_no, "empty line");
    }
    auto f = split(line, ',');
    if (f.size() != 7) {
      throw ParseError(line_no, "expected 7 fields, found " + std::to_string(f.size()));
    }
    PacketRecord r;
    auto src = parse_ipv4(f[1]);
    auto dst = parse_ipv4(f[2]);
    unsigned proto = 0;
    if (!parse_uint(f[0], r.ts_us)) throw ParseError(line_no, "bad ts_us");
    if (!src) throw ParseError(line_no, "bad src_ip");
    if (!dst) throw ParseError(line_no, "bad dst_ip");
    if (!parse_uint(f[3], r.src_port)) throw ParseError(line_no, "bad src_port");
    if (!parse_uint(f[4], r.dst_port)) throw ParseError(line_no, "bad dst_port");
    if (!parse_uint(f[5], proto) || proto > 255) throw ParseError(line_no, "bad proto");
    if (!parse_uint(f[6], r.len_bytes) || r.len_bytes < kMinPacketBytes) {
      throw ParseError(line_no, "bad len_bytes (must be 20..65535)");
    }
    r.src_ip = *src;
    r.dst_ip = *dst;
    r.proto = static_cast<std::uint8_t>(proto);
    if (!records.empty() && r.ts_us < records.back().ts_us) {
      throw ParseError(line_no, "timestamp " + std::to_string(r.ts_us) +
                                    " precedes previous timestamp " +
                                    std::to_string(records.back().ts_us));
    }
    records.push_back(r);
  }
  return Trace(std::move(records));
}

Trace parse_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file " + path.string());
  return parse_trace(in);
}

void format_record(std::string& buf, const PacketRecord& r) {
  buf += std::to_string(r.ts_us);
  buf += ',';
  buf += format_ipv4(r.src_ip);
  buf += ',';
  buf += format_ipv4(r.dst_ip);
  buf += ',';
  buf += std::to_string(r.src_port);
  buf += ',';
  buf += std::to_string(r.dst_port);
  buf += ',';
  buf += std::to_string(r.proto);
  buf += ',';
  buf += std::to_string(r.len_bytes);
  buf += '\n';
}

void write_trace(std::ostream& out, const Trace& trace) {
  std::string buf;
  buf.reserve(64);
  out << kTraceCsvHeader << '\n';
  for (const PacketRecord& r : trace) {
    buf.clear();
    format_record(buf, r);
    out << buf;
  }
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write trace file " + path.string());
  write_trace(out, trace);
  if (!out) throw ConfigError("error writing trace file " + path.string());
}

void SyntheticSpec::validate() const {
  if (!(rate_pps > 0) || !std::isfinite(rate_pps)) {
    throw ConfigError("rate_pps must be positive");
  }
  if (!(duration_s >= 0) || !std::isfinite(duration_s)) {
    throw ConfigError("duration_s must be non-negative");
  }
  if (flow_count < 1) throw ConfigError("flow_count must be >= 1");
  if (!(zipf_s >= 0) || !std::isfinite(zipf_s)) {
    throw ConfigError("zipf_s must be >= 0");
  }
}

std::uint64_t SyntheticSpec::packet_count() const {
  return static_cast<std::uint64_t>(std::llround(rate_pps * duration_s));
}

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi] without the implementation-defined
// std::uniform_int_distribution, so traces are identical across standard
// libraries.
std::uint64_t uniform_range(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + x % span;
}

constexpr std::array<std::uint8_t, 4> kProtocols = {6, 6, 17, 1};

}  // namespace

TraceGenerator::TraceGenerator(const SyntheticSpec& spec)
    : spec_(spec), total_(0), rng_(spec.seed) {
  spec_.validate();
  total_ = spec_.packet_count();

  using Tuple = std::tuple<std::uint32_t, std::uint32_t, std::uint16_t,
                           std::uint16_t, std::uint8_t>;
  std::set<Tuple> seen;
  flows_.reserve(spec_.flow_count);
  while (flows_.size() < spec_.flow_count) {
    PacketRecord f;
    f.src_ip = static_cast<std::uint32_t>(rng_());
    f.dst_ip = static_cast<std::uint32_t>(rng_());
    f.src_port = static_cast<std::uint16_t>(uniform_range(rng_, 1024, 65535));
    f.dst_port = static_cast<std::uint16_t>(uniform_range(rng_, 1, 65535));
    f.proto = kProtocols[uniform_range(rng_, 0, kProtocols.size() - 1)];
    if (seen.emplace(f.src_ip, f.dst_ip, f.src_port, f.dst_port, f.proto).second) {
      flows_.push_back(f);
    }
  }

  cdf_.resize(spec_.flow_count);
  double acc = 0.0;
  for (std::uint32_t r = 0; r < spec_.flow_count; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -spec_.zipf_s);
    cdf_[r] = acc;
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint32_t TraceGenerator::draw_flow() {
  const double u = unit_interval(rng_);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

PacketRecord TraceGenerator::next() {
  PacketRecord p = flows_[draw_flow()];
  // The epsilon absorbs rounding when 10^6 / rate is integral.
  const long double spacing_us = 1.0e6L / static_cast<long double>(spec_.rate_pps);
  p.ts_us = static_cast<std::uint64_t>(std::floor(spacing_us * next_ + 1e-9L));
  p.len_bytes = static_cast<std::uint16_t>(uniform_range(rng_, 64, 1500));
  ++next_;
  return p;
}

Trace generate(const SyntheticSpec& spec, std::uint64_t max_records) {
  spec.validate();
  const std::uint64_t n = spec.packet_count();
  if (n > max_records) {
    throw ConfigError("synthetic trace of " + std::to_string(n) +
                      " records exceeds the in-memory cap of " +
                      std::to_string(max_records) +
                      "; use TraceGenerator to stream it instead");
  }
  TraceGenerator gen(spec);
  std::vector<PacketRecord> records;
  records.reserve(n);
  while (!gen.done()) records.push_back(gen.next());
  return Trace(std::move(records));
}

TraceStats stats(const Trace& trace, std::span<const FlowKeyScheme> schemes) {
  if (trace.empty()) throw ConfigError("cannot compute statistics of an empty trace");
  TraceStats s;
  s.packet_count = trace.size();
  s.duration_us = trace.duration_us();
  s.avg_pps = s.duration_us == 0
                  ? static_cast<double>(s.packet_count)
                  : static_cast<double>(s.packet_count) /
                        (static_cast<double>(s.duration_us) / 1e6);
  for (const FlowKeyScheme& scheme : schemes) {
    std::unordered_set<FlowKey, FlowKeyHash> keys;
    for (const PacketRecord& r : trace) keys.insert(extract_key(r, scheme));
    s.distinct_keys.emplace_back(scheme.id(), keys.size());
  }
  return s;
}

}  // namespace xplane
