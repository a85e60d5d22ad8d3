#ifndef ATTACKPROC_RATE_SERIES_HPP
#define ATTACKPROC_RATE_SERIES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attackproc/flow.hpp"

namespace attackproc {

// One level of the attack-process hierarchy. A network process counts every
// flow; victim/port processes restrict to one honeypot address (and port);
// the attacker process keeps only each attacker's first flow per victim.
struct Resolution {
  enum class Kind { network, victim, port, attacker };
  Kind kind = Kind::network;
  std::uint32_t victim_ip = 0;   // victim/port/attacker kinds
  std::uint16_t victim_port = 0; // port kind only

  static Resolution network() { return {}; }
  static Resolution victim(std::uint32_t ip) { return {Kind::victim, ip, 0}; }
  static Resolution port(std::uint32_t ip, std::uint16_t p) { return {Kind::port, ip, p}; }
  static Resolution attacker(std::uint32_t ip) { return {Kind::attacker, ip, 0}; }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

std::string resolution_id(const Resolution& r);
Resolution parse_resolution(const std::string& id);

struct TimeWindow {
  double origin = 0.0;
  std::size_t buckets = 0;
};

// Attack rate X_t: flow arrivals per bucket at one resolution.
struct RateSeries {
  Resolution resolution;
  double bucket = 3600.0;
  double origin = 0.0;
  std::vector<std::uint64_t> counts;

  std::vector<double> as_doubles() const {
    return std::vector<double>(counts.begin(), counts.end());
  }
};

struct InterArrivalSample {
  Resolution resolution;
  std::vector<double> gaps;  // seconds, strictly positive
};

// Counts flow starts per bucket. When no window is given, the origin is the
// earliest matching start floored to a whole bucket boundary and the span
// just covers the last start. Throws EmptySelection when nothing matches.
RateSeries build_rate_series(std::span<const FlowRecord> flows, const Resolution& resolution,
                             double bucket = 3600.0,
                             std::optional<TimeWindow> window = std::nullopt);

// Keeps, per distinct attacker of victim_ip, only that attacker's earliest
// flow over the whole period.
std::vector<FlowRecord> derive_attacker_level(std::span<const FlowRecord> flows,
                                              std::uint32_t victim_ip);

// Gaps between consecutive arrival times at a resolution. Tied timestamps get
// deterministic jitter of k*tie_jitter for the k-th member of a tie group, so
// every gap is positive. Requires at least two matching flows.
InterArrivalSample inter_arrivals(std::span<const FlowRecord> flows,
                                  const Resolution& resolution, double tie_jitter = 1e-6);

// Distinct victim addresses / victim ports present in the flow set.
std::vector<std::uint32_t> victim_ips(std::span<const FlowRecord> flows);
std::vector<std::uint16_t> victim_ports(std::span<const FlowRecord> flows,
                                        std::uint32_t victim_ip);

}  // namespace attackproc

#endif
