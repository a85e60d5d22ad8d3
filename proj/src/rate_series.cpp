#include "attackproc/rate_series.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "attackproc/errors.hpp"

namespace attackproc {

std::string resolution_id(const Resolution& r) {
  switch (r.kind) {
    case Resolution::Kind::network:
      return "network";
    case Resolution::Kind::victim:
      return "victim/" + format_ipv4(r.victim_ip);
    case Resolution::Kind::port:
      return "port/" + format_ipv4(r.victim_ip) + ":" + std::to_string(r.victim_port);
    case Resolution::Kind::attacker:
      return "attacker/" + format_ipv4(r.victim_ip);
  }
  return "?";
}

Resolution parse_resolution(const std::string& id) {
  if (id == "network") return Resolution::network();
  auto slash = id.find('/');
  if (slash == std::string::npos) {
    throw_data_error(ErrorCode::bad_value, "unrecognized resolution '" + id + "'");
  }
  const std::string kind = id.substr(0, slash);
  const std::string rest = id.substr(slash + 1);
  if (kind == "victim") return Resolution::victim(parse_ipv4(rest));
  if (kind == "attacker") return Resolution::attacker(parse_ipv4(rest));
  if (kind == "port") {
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw_data_error(ErrorCode::bad_value, "port resolution needs ip:port in '" + id + "'");
    }
    const int port = std::stoi(rest.substr(colon + 1));
    if (port < 0 || port > 65535) {
      throw_data_error(ErrorCode::bad_value, "port out of range in '" + id + "'");
    }
    return Resolution::port(parse_ipv4(rest.substr(0, colon)), static_cast<std::uint16_t>(port));
  }
  throw_data_error(ErrorCode::bad_value, "unrecognized resolution '" + id + "'");
}

namespace {

bool matches(const FlowRecord& f, const Resolution& r) {
  switch (r.kind) {
    case Resolution::Kind::network:
      return true;
    case Resolution::Kind::victim:
    case Resolution::Kind::attacker:
      return f.victim_ip == r.victim_ip;
    case Resolution::Kind::port:
      return f.victim_ip == r.victim_ip && f.victim_port == r.victim_port;
  }
  return false;
}

std::vector<double> matching_starts(std::span<const FlowRecord> flows, const Resolution& r) {
  std::vector<FlowRecord> reduced;
  std::span<const FlowRecord> source = flows;
  if (r.kind == Resolution::Kind::attacker) {
    reduced = derive_attacker_level(flows, r.victim_ip);
    source = reduced;
  }
  std::vector<double> starts;
  for (const FlowRecord& f : source) {
    if (matches(f, r)) starts.push_back(f.start);
  }
  std::sort(starts.begin(), starts.end());
  return starts;
}

}  // namespace

RateSeries build_rate_series(std::span<const FlowRecord> flows, const Resolution& resolution,
                             double bucket, std::optional<TimeWindow> window) {
  if (bucket <= 0) {
    throw_data_error(ErrorCode::bad_value, "bucket duration must be positive");
  }
  std::vector<double> starts = matching_starts(flows, resolution);
  if (starts.empty()) {
    throw_data_error(ErrorCode::empty_selection,
                     "no flow matches resolution " + resolution_id(resolution));
  }

  RateSeries series;
  series.resolution = resolution;
  series.bucket = bucket;
  if (window) {
    series.origin = window->origin;
    series.counts.assign(window->buckets, 0);
  } else {
    series.origin = std::floor(starts.front() / bucket) * bucket;
    const std::size_t last =
        static_cast<std::size_t>(std::floor((starts.back() - series.origin) / bucket));
    series.counts.assign(last + 1, 0);
  }

  for (double s : starts) {
    const double offset = (s - series.origin) / bucket;
    if (offset < 0) continue;
    const std::size_t index = static_cast<std::size_t>(std::floor(offset));
    if (index < series.counts.size()) ++series.counts[index];
  }
  return series;
}

std::vector<FlowRecord> derive_attacker_level(std::span<const FlowRecord> flows,
                                              std::uint32_t victim_ip) {
  std::vector<FlowRecord> sorted;
  for (const FlowRecord& f : flows) {
    if (f.victim_ip == victim_ip) sorted.push_back(f);
  }
  std::sort(sorted.begin(), sorted.end(), [](const FlowRecord& a, const FlowRecord& b) {
    return std::tie(a.start, a.attacker_ip, a.attacker_port, a.victim_port) <
           std::tie(b.start, b.attacker_ip, b.attacker_port, b.victim_port);
  });
  std::vector<FlowRecord> kept;
  std::set<std::uint32_t> seen;
  for (const FlowRecord& f : sorted) {
    if (seen.insert(f.attacker_ip).second) kept.push_back(f);
  }
  return kept;
}

InterArrivalSample inter_arrivals(std::span<const FlowRecord> flows,
                                  const Resolution& resolution, double tie_jitter) {
  std::vector<double> starts = matching_starts(flows, resolution);
  if (starts.size() < 2) {
    throw_data_error(ErrorCode::too_few_arrivals,
                     "need at least 2 arrivals at " + resolution_id(resolution));
  }
  // Spread exact ties below capture resolution so gaps stay positive.
  std::size_t tie_index = 0;
  for (std::size_t i = 1; i < starts.size(); ++i) {
    if (starts[i] == starts[i - 1 - tie_index]) {
      ++tie_index;
      starts[i] += static_cast<double>(tie_index) * tie_jitter;
    } else {
      tie_index = 0;
    }
  }
  InterArrivalSample sample;
  sample.resolution = resolution;
  sample.gaps.reserve(starts.size() - 1);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    sample.gaps.push_back(starts[i] - starts[i - 1]);
  }
  return sample;
}

std::vector<std::uint32_t> victim_ips(std::span<const FlowRecord> flows) {
  std::set<std::uint32_t> ips;
  for (const FlowRecord& f : flows) ips.insert(f.victim_ip);
  return {ips.begin(), ips.end()};
}

std::vector<std::uint16_t> victim_ports(std::span<const FlowRecord> flows,
                                        std::uint32_t victim_ip) {
  std::set<std::uint16_t> ports;
  for (const FlowRecord& f : flows) {
    if (f.victim_ip == victim_ip) ports.insert(f.victim_port);
  }
  return {ports.begin(), ports.end()};
}

}  // namespace attackproc
