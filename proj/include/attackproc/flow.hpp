#ifndef ATTACKPROC_FLOW_HPP
#define ATTACKPROC_FLOW_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace attackproc {

enum class Protocol : std::uint8_t { tcp, udp };

// TCP flag bits as used in PacketRecord::tcp_flags.
namespace tcpflag {
inline constexpr std::uint8_t fin = 0x01;
inline constexpr std::uint8_t syn = 0x02;
inline constexpr std::uint8_t rst = 0x04;
inline constexpr std::uint8_t psh = 0x08;
inline constexpr std::uint8_t ack = 0x10;
inline constexpr std::uint8_t urg = 0x20;
}  // namespace tcpflag

struct PacketRecord {
  double timestamp = 0.0;  // seconds since epoch, microsecond fraction
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Protocol protocol = Protocol::tcp;
  std::uint8_t tcp_flags = 0;  // empty for UDP
  std::uint32_t payload_len = 0;
};

enum class Termination : std::uint8_t { fin, rst, timeout, lifetime, end_of_capture };

const char* termination_name(Termination t);
const char* protocol_name(Protocol p);

struct FlowRecord {
  std::uint32_t attacker_ip = 0;
  std::uint16_t attacker_port = 0;
  std::uint32_t victim_ip = 0;
  std::uint16_t victim_port = 0;
  Protocol protocol = Protocol::tcp;
  double start = 0.0;  // timestamp of first packet = attack arrival time
  double end = 0.0;    // timestamp of last packet
  std::uint64_t packet_count = 0;
  Termination termination = Termination::end_of_capture;

  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

// Inclusive IPv4 range; single addresses have first == last.
struct IpRange {
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  bool contains(std::uint32_t ip) const { return ip >= first && ip <= last; }
};

// Parses "a.b.c.d", "a.b.c.d/prefix" or "a.b.c.d-e.f.g.h".
IpRange parse_ip_range(const std::string& text);
std::uint32_t parse_ipv4(const std::string& text);
std::string format_ipv4(std::uint32_t ip);

struct AssemblyConfig {
  double flow_timeout = 60.0;
  double flow_lifetime = 300.0;
  // Victim ports to keep; empty keeps everything.
  std::set<std::uint16_t> production_ports;
  // Honeypot/victim address ranges. When empty, each packet's destination is
  // taken as the victim.
  std::vector<IpRange> honeypot_ranges;

  bool victim_side(std::uint32_t ip) const {
    for (const IpRange& r : honeypot_ranges) {
      if (r.contains(ip)) return true;
    }
    return false;
  }
};

// Port numbers for the services commonly emulated by low-interaction
// honeypots; accepted by config/CLI as names so nothing is hard-coded.
std::uint16_t service_port(const std::string& name);  // smb,netbios,http,mysql,ssh

struct AssemblyResult {
  std::vector<FlowRecord> flows;
  std::uint64_t packets_in_flows = 0;   // packets inside emitted flows
  std::uint64_t packets_filtered = 0;   // packets in flows dropped by port filter
  std::uint64_t packets_unoriented = 0; // packets with no attacker/victim orientation
};

// Groups packets into flows keyed by the 5-tuple. FIN/RST close a TCP flow
// after the closing packet; an inactivity gap > flow_timeout or an age
// > flow_lifetime splits the flow. Flows still open at the end of input are
// closed as end_of_capture. Output is sorted by (start, key).
AssemblyResult assemble_flows(std::span<const PacketRecord> packets,
                              const AssemblyConfig& config);

struct FlowLogResult {
  std::vector<FlowRecord> flows;
  std::uint64_t bad_lines = 0;
};

// Reads NDJSON flow records (one object per line, FlowRecord field names,
// timestamps in decimal seconds). Invalid lines are counted, never fatal.
FlowLogResult parse_flow_log(std::istream& in);

void write_flow_log(std::ostream& out, std::span<const FlowRecord> flows);

}  // namespace attackproc

#endif
