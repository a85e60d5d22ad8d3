#ifndef ATTACKPROC_PCAP_HPP
#define ATTACKPROC_PCAP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attackproc/flow.hpp"

namespace attackproc {

struct PcapResult {
  std::vector<PacketRecord> packets;
  std::uint64_t skipped_packets = 0;    // non-IPv4/TCP/UDP or undecodable
  std::uint64_t truncated_packets = 0;  // incomplete trailing record
};

// Parses a classic pcap capture (magic 0xa1b2c3d4, native or byte-swapped,
// Ethernet link type). Yields IPv4 TCP/UDP packets in capture order; anything
// else is counted as skipped. Throws DataError with BadMagic or CorruptHeader
// on unusable input.
PcapResult parse_pcap(std::span<const std::uint8_t> bytes);

PcapResult parse_pcap_file(const std::string& path);

}  // namespace attackproc

#endif
