#include "attackproc/flow.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "attackproc/errors.hpp"

namespace attackproc {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::fin: return "FIN";
    case Termination::rst: return "RST";
    case Termination::timeout: return "TIMEOUT";
    case Termination::lifetime: return "LIFETIME";
    case Termination::end_of_capture: return "END_OF_CAPTURE";
  }
  return "?";
}

const char* protocol_name(Protocol p) {
  return p == Protocol::tcp ? "TCP" : "UDP";
}

std::uint32_t parse_ipv4(const std::string& text) {
  unsigned a, b, c, d;
  char extra;
  if (std::sscanf(text.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &extra) != 4 ||
      a > 255 || b > 255 || c > 255 || d > 255) {
    throw_data_error(ErrorCode::bad_value, "invalid IPv4 address '" + text + "'");
  }
  return (a << 24) | (b << 16) | (c << 8) | d;
}

std::string format_ipv4(std::uint32_t ip) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xff, (ip >> 16) & 0xff,
                (ip >> 8) & 0xff, ip & 0xff);
  return buf;
}

IpRange parse_ip_range(const std::string& text) {
  auto slash = text.find('/');
  auto dash = text.find('-');
  if (slash != std::string::npos) {
    std::uint32_t base = parse_ipv4(text.substr(0, slash));
    int prefix = 0;
    auto tail = text.substr(slash + 1);
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), prefix);
    if (ec != std::errc{} || p != tail.data() + tail.size() || prefix < 0 || prefix > 32) {
      throw_data_error(ErrorCode::bad_value, "invalid prefix length in '" + text + "'");
    }
    const std::uint32_t mask = prefix == 0 ? 0 : ~std::uint32_t{0} << (32 - prefix);
    return {base & mask, (base & mask) | ~mask};
  }
  if (dash != std::string::npos) {
    IpRange r{parse_ipv4(text.substr(0, dash)), parse_ipv4(text.substr(dash + 1))};
    if (r.first > r.last) std::swap(r.first, r.last);
    return r;
  }
  std::uint32_t ip = parse_ipv4(text);
  return {ip, ip};
}

std::uint16_t service_port(const std::string& name) {
  if (name == "smb") return 445;
  if (name == "netbios") return 139;
  if (name == "http") return 80;
  if (name == "mysql") return 3306;
  if (name == "ssh") return 22;
  throw_data_error(ErrorCode::bad_value, "unknown service name '" + name + "'");
}

namespace {

struct FlowKey {
  std::uint32_t attacker_ip;
  std::uint32_t victim_ip;
  std::uint16_t attacker_port;
  std::uint16_t victim_port;
  Protocol protocol;

  bool operator==(const FlowKey&) const = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const {
    std::uint64_t h = k.attacker_ip;
    h = h * 1000003u ^ k.victim_ip;
    h = h * 1000003u ^ (static_cast<std::uint64_t>(k.attacker_port) << 17);
    h = h * 1000003u ^ (static_cast<std::uint64_t>(k.victim_port) << 1);
    h = h * 1000003u ^ static_cast<std::uint64_t>(k.protocol);
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

struct ActiveFlow {
  double start = 0.0;
  double end = 0.0;
  std::uint64_t packet_count = 0;
};

FlowRecord make_record(const FlowKey& key, const ActiveFlow& flow, Termination term) {
  FlowRecord r;
  r.attacker_ip = key.attacker_ip;
  r.attacker_port = key.attacker_port;
  r.victim_ip = key.victim_ip;
  r.victim_port = key.victim_port;
  r.protocol = key.protocol;
  r.start = flow.start;
  r.end = flow.end;
  r.packet_count = flow.packet_count;
  r.termination = term;
  return r;
}

}  // namespace

AssemblyResult assemble_flows(std::span<const PacketRecord> packets,
                              const AssemblyConfig& config) {
  std::vector<PacketRecord> sorted;
  std::span<const PacketRecord> input = packets;
  if (!std::is_sorted(packets.begin(), packets.end(),
                      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; })) {
    sorted.assign(packets.begin(), packets.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    input = sorted;
  }

  AssemblyResult result;
  std::unordered_map<FlowKey, ActiveFlow, FlowKeyHash> active;
  const bool directed = !config.honeypot_ranges.empty();

  auto close = [&](const FlowKey& key, const ActiveFlow& flow, Termination term) {
    result.flows.push_back(make_record(key, flow, term));
  };

  for (const PacketRecord& pkt : input) {
    FlowKey forward{pkt.src_ip, pkt.dst_ip, pkt.src_port, pkt.dst_port, pkt.protocol};
    FlowKey reverse{pkt.dst_ip, pkt.src_ip, pkt.dst_port, pkt.src_port, pkt.protocol};

    auto it = active.find(forward);
    if (it == active.end()) it = active.find(reverse);

    if (it != active.end()) {
      ActiveFlow& flow = it->second;
      if (pkt.timestamp - flow.end > config.flow_timeout) {
        close(it->first, flow, Termination::timeout);
        active.erase(it);
        it = active.end();
      } else if (pkt.timestamp - flow.start > config.flow_lifetime) {
        close(it->first, flow, Termination::lifetime);
        active.erase(it);
        it = active.end();
      }
    }

    if (it != active.end()) {
      ActiveFlow& flow = it->second;
      flow.end = pkt.timestamp;
      ++flow.packet_count;
      if (pkt.protocol == Protocol::tcp && (pkt.tcp_flags & (tcpflag::fin | tcpflag::rst))) {
        close(it->first, flow,
              (pkt.tcp_flags & tcpflag::rst) ? Termination::rst : Termination::fin);
        active.erase(it);
      }
      continue;
    }

    // New flow; orient attacker/victim by the configured honeypot ranges,
    // falling back to "destination is the victim" when none are given.
    FlowKey key = forward;
    if (directed) {
      const bool src_victim = config.victim_side(pkt.src_ip);
      const bool dst_victim = config.victim_side(pkt.dst_ip);
      if (src_victim == dst_victim) {
        ++result.packets_unoriented;
        continue;
      }
      if (src_victim) key = reverse;
    }

    ActiveFlow flow{pkt.timestamp, pkt.timestamp, 1};
    if (pkt.protocol == Protocol::tcp && (pkt.tcp_flags & (tcpflag::fin | tcpflag::rst))) {
      close(key, flow, (pkt.tcp_flags & tcpflag::rst) ? Termination::rst : Termination::fin);
    } else {
      active.emplace(key, flow);
    }
  }

  for (const auto& [key, flow] : active) {
    close(key, flow, Termination::end_of_capture);
  }

  if (!config.production_ports.empty()) {
    std::vector<FlowRecord> kept;
    kept.reserve(result.flows.size());
    for (const FlowRecord& f : result.flows) {
      if (config.production_ports.count(f.victim_port)) {
        kept.push_back(f);
      } else {
        result.packets_filtered += f.packet_count;
      }
    }
    result.flows = std::move(kept);
  }

  std::sort(result.flows.begin(), result.flows.end(), [](const FlowRecord& a, const FlowRecord& b) {
    return std::tie(a.start, a.attacker_ip, a.attacker_port, a.victim_ip, a.victim_port,
                    a.protocol, a.end) <
           std::tie(b.start, b.attacker_ip, b.attacker_port, b.victim_ip, b.victim_port,
                    b.protocol, b.end);
  });

  for (const FlowRecord& f : result.flows) result.packets_in_flows += f.packet_count;
  return result;
}

namespace {

bool flow_from_json(const nlohmann::json& j, FlowRecord& f) {
  if (!j.is_object()) return false;
  const char* required[] = {"attacker_ip", "attacker_port", "victim_ip", "victim_port",
                            "protocol",    "start",         "end",       "packet_count",
                            "termination"};
  for (const char* field : required) {
    if (!j.contains(field)) return false;
  }
  try {
    f.attacker_ip = parse_ipv4(j.at("attacker_ip").get<std::string>());
    f.victim_ip = parse_ipv4(j.at("victim_ip").get<std::string>());
    const auto aport = j.at("attacker_port").get<std::int64_t>();
    const auto vport = j.at("victim_port").get<std::int64_t>();
    if (aport < 0 || aport > 65535 || vport < 0 || vport > 65535) return false;
    f.attacker_port = static_cast<std::uint16_t>(aport);
    f.victim_port = static_cast<std::uint16_t>(vport);
    const std::string proto = j.at("protocol").get<std::string>();
    if (proto == "TCP") {
      f.protocol = Protocol::tcp;
    } else if (proto == "UDP") {
      f.protocol = Protocol::udp;
    } else {
      return false;
    }
    f.start = j.at("start").get<double>();
    f.end = j.at("end").get<double>();
    const auto count = j.at("packet_count").get<std::int64_t>();
    if (count < 1) return false;
    f.packet_count = static_cast<std::uint64_t>(count);
    const std::string term = j.at("termination").get<std::string>();
    bool found = false;
    for (Termination t : {Termination::fin, Termination::rst, Termination::timeout,
                          Termination::lifetime, Termination::end_of_capture}) {
      if (term == termination_name(t)) {
        f.termination = t;
        found = true;
        break;
      }
    }
    if (!found) return false;
  } catch (const nlohmann::json::exception&) {
    return false;
  } catch (const DataError&) {
    return false;
  }
  return f.start >= 0 && f.end >= f.start;
}

}  // namespace

FlowLogResult parse_flow_log(std::istream& in) {
  FlowLogResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    FlowRecord f;
    if (j.is_discarded() || !flow_from_json(j, f)) {
      ++result.bad_lines;
      continue;
    }
    result.flows.push_back(f);
  }
  return result;
}

void write_flow_log(std::ostream& out, std::span<const FlowRecord> flows) {
  for (const FlowRecord& f : flows) {
    nlohmann::ordered_json j;
    j["attacker_ip"] = format_ipv4(f.attacker_ip);
    j["attacker_port"] = f.attacker_port;
    j["victim_ip"] = format_ipv4(f.victim_ip);
    j["victim_port"] = f.victim_port;
    j["protocol"] = protocol_name(f.protocol);
    // Shortest-round-trip float form, so a reloaded log reproduces the exact
    // timestamps and downstream results are bit-stable across the file hop.
    j["start"] = f.start;
    j["end"] = f.end;
    j["packet_count"] = f.packet_count;
    j["termination"] = termination_name(f.termination);
    out << j.dump() << '\n';
  }
}

}  // namespace attackproc
