#include "attackproc/pcap.hpp"

#include <cstring>
#include <fstream>

#include "attackproc/errors.hpp"

namespace attackproc {

namespace {

constexpr std::uint32_t kMagicNative = 0xa1b2c3d4;
constexpr std::uint32_t kMagicSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kLinkEthernet = 1;
// Anything above the conventional maximum snap length is treated as a
// corrupt record header rather than a truncated capture.
constexpr std::uint32_t kMaxRecordLen = 262144;

class Cursor {
 public:
  Cursor(std::span<const std::uint8_t> bytes, bool swap) : bytes_(bytes), swap_(swap) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return swap_ ? __builtin_bswap32(v) : v;
  }

  std::uint16_t u16() {
    std::uint16_t v;
    std::memcpy(&v, bytes_.data() + pos_, 2);
    pos_ += 2;
    return swap_ ? __builtin_bswap16(v) : v;
  }

  void skip(std::size_t n) { pos_ += n; }
  std::span<const std::uint8_t> slice(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  bool swap_;
};

inline std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

inline std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) |
         (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) |
         static_cast<std::uint32_t>(b[off + 3]);
}

// Decodes one Ethernet frame into a PacketRecord; returns false for anything
// that is not a parseable IPv4 TCP/UDP packet.
bool decode_frame(std::span<const std::uint8_t> frame, double timestamp, PacketRecord& out) {
  if (frame.size() < 14 + 20) return false;
  if (be16(frame, 12) != 0x0800) return false;  // not IPv4
  auto ip = frame.subspan(14);
  if ((ip[0] >> 4) != 4) return false;
  const std::size_t ihl = static_cast<std::size_t>(ip[0] & 0x0f) * 4;
  if (ihl < 20 || ip.size() < ihl) return false;
  const std::uint16_t total_len = be16(ip, 2);
  if (total_len < ihl) return false;
  const std::uint16_t frag_offset = be16(ip, 6) & 0x1fff;
  if (frag_offset != 0) return false;  // non-first fragments carry no ports
  const std::uint8_t proto = ip[9];

  out.timestamp = timestamp;
  out.src_ip = be32(ip, 12);
  out.dst_ip = be32(ip, 16);
  auto l4 = ip.subspan(ihl);

  if (proto == 6) {
    if (l4.size() < 20) return false;
    out.protocol = Protocol::tcp;
    out.src_port = be16(l4, 0);
    out.dst_port = be16(l4, 2);
    const std::size_t data_offset = static_cast<std::size_t>(l4[12] >> 4) * 4;
    if (data_offset < 20) return false;
    out.tcp_flags = l4[13] & 0x3f;
    const std::size_t header_bytes = ihl + data_offset;
    out.payload_len = total_len > header_bytes
                          ? static_cast<std::uint32_t>(total_len - header_bytes)
                          : 0;
    return true;
  }
  if (proto == 17) {
    if (l4.size() < 8) return false;
    out.protocol = Protocol::udp;
    out.src_port = be16(l4, 0);
    out.dst_port = be16(l4, 2);
    out.tcp_flags = 0;
    const std::uint16_t udp_len = be16(l4, 4);
    out.payload_len = udp_len > 8 ? static_cast<std::uint32_t>(udp_len - 8) : 0;
    return true;
  }
  return false;
}

}  // namespace

PcapResult parse_pcap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 24) {
    throw_data_error(ErrorCode::bad_magic, "input shorter than a pcap global header");
  }
  std::uint32_t magic;
  std::memcpy(&magic, bytes.data(), 4);
  bool swap;
  if (magic == kMagicNative) {
    swap = false;
  } else if (magic == kMagicSwapped) {
    swap = true;
  } else {
    throw_data_error(ErrorCode::bad_magic, "not a classic pcap capture");
  }

  Cursor cur(bytes, swap);
  cur.skip(4);          // magic
  cur.u16();            // version major
  cur.u16();            // version minor
  cur.u32();            // thiszone
  cur.u32();            // sigfigs
  cur.u32();            // snaplen
  const std::uint32_t link = cur.u32();
  if (link != kLinkEthernet) {
    throw_data_error(ErrorCode::bad_value, "unsupported pcap link type " + std::to_string(link));
  }

  PcapResult result;
  while (cur.remaining() > 0) {
    if (cur.remaining() < 16) {
      ++result.truncated_packets;  // partial trailing record header
      break;
    }
    const std::uint32_t ts_sec = cur.u32();
    const std::uint32_t ts_usec = cur.u32();
    const std::uint32_t incl_len = cur.u32();
    cur.u32();  // orig_len
    if (incl_len > kMaxRecordLen) {
      throw_data_error(ErrorCode::corrupt_header,
                       "record length " + std::to_string(incl_len) + " exceeds sane bounds");
    }
    if (incl_len > cur.remaining()) {
      ++result.truncated_packets;
      break;
    }
    auto frame = cur.slice(incl_len);
    const double timestamp = static_cast<double>(ts_sec) + 1e-6 * static_cast<double>(ts_usec);
    PacketRecord record;
    if (decode_frame(frame, timestamp, record)) {
      result.packets.push_back(record);
    } else {
      ++result.skipped_packets;
    }
  }
  return result;
}

PcapResult parse_pcap_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw_data_error(ErrorCode::io_failure, "cannot open " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_pcap(bytes);
}

}  // namespace attackproc
