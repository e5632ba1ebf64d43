// SPDX-License-Identifier: MIT

#include "gcw/pcap.hpp"

#include <cstring>

namespace gcw::capture {

namespace {

constexpr std::uint32_t kMagicUsec = 0xa1b2c3d4;
constexpr std::uint32_t kMagicNsec = 0xa1b23c4d;
constexpr std::uint32_t kMagicUsecSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNsecSwapped = 0x4d3cb2a1;
constexpr std::uint32_t kLinktypeEthernet = 1;
// Sanity bound for a single captured record; GSMTAP datagrams are tiny.
constexpr std::uint32_t kMaxRecordBytes = 256 * 1024;

std::uint32_t swap32(std::uint32_t v) {
  return ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
}

std::uint16_t be16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

}  // namespace

PcapSource::PcapSource(const std::string& path, std::uint16_t gsmtap_port)
    : gsmtap_port_(gsmtap_port) {
  file_.reset(std::fopen(path.c_str(), "rb"));
  if (!file_) {
    raise(Errc::source_unavailable, "cannot open capture file " + path);
  }
  std::uint8_t header[24];
  if (std::fread(header, 1, sizeof(header), file_.get()) != sizeof(header)) {
    raise(Errc::corrupt_capture_header, path + ": shorter than the 24-byte pcap global header");
  }
  std::uint32_t magic;
  std::memcpy(&magic, header, 4);
  switch (magic) {
    case kMagicUsec: break;
    case kMagicNsec: nanosecond_ = true; break;
    case kMagicUsecSwapped: swapped_ = true; break;
    case kMagicNsecSwapped:
      swapped_ = true;
      nanosecond_ = true;
      break;
    default:
      raise(Errc::corrupt_capture_header, path + ": bad pcap magic");
  }
  std::uint32_t linktype;
  std::memcpy(&linktype, header + 20, 4);
  if (swapped_) linktype = swap32(linktype);
  if (linktype != kLinktypeEthernet) {
    raise(Errc::unsupported_link_type,
          path + ": link type " + std::to_string(linktype) + " (only Ethernet-II is supported)");
  }
}

std::optional<Datagram> PcapSource::next() {
  Datagram d;
  while (!done_) {
    if (read_record(d)) {
      ++stats_.yielded;
      return d;
    }
  }
  return std::nullopt;
}

// Reads one pcap record. Returns true when a GSMTAP-port UDP payload was
// extracted into `out`; false when the record was filtered or malformed, or
// the file ended (done_ set).
bool PcapSource::read_record(Datagram& out) {
  std::uint8_t rec[16];
  std::size_t got = std::fread(rec, 1, sizeof(rec), file_.get());
  if (got == 0) {
    done_ = true;  // clean end of file
    return false;
  }
  if (got != sizeof(rec)) {
    ++stats_.malformed;  // trailing partial record header
    done_ = true;
    return false;
  }
  std::uint32_t ts_sec, ts_frac, incl_len, orig_len;
  std::memcpy(&ts_sec, rec, 4);
  std::memcpy(&ts_frac, rec + 4, 4);
  std::memcpy(&incl_len, rec + 8, 4);
  std::memcpy(&orig_len, rec + 12, 4);
  if (swapped_) {
    ts_sec = swap32(ts_sec);
    ts_frac = swap32(ts_frac);
    incl_len = swap32(incl_len);
    orig_len = swap32(orig_len);
  }
  if (incl_len > kMaxRecordBytes) {
    // Record boundary is unrecoverable past this point.
    ++stats_.malformed;
    done_ = true;
    return false;
  }
  std::vector<std::uint8_t> pkt(incl_len);
  if (incl_len > 0 && std::fread(pkt.data(), 1, incl_len, file_.get()) != incl_len) {
    ++stats_.malformed;
    done_ = true;
    return false;
  }

  // Ethernet-II
  if (pkt.size() < 14) {
    ++stats_.malformed;
    return false;
  }
  std::uint16_t ethertype = be16(pkt.data() + 12);
  if (ethertype != 0x0800) {
    ++stats_.filtered_out;
    return false;
  }

  // IPv4
  const std::uint8_t* ip = pkt.data() + 14;
  std::size_t ip_avail = pkt.size() - 14;
  if (ip_avail < 20 || (ip[0] >> 4) != 4) {
    ++stats_.malformed;
    return false;
  }
  std::size_t ihl = static_cast<std::size_t>(ip[0] & 0x0F) * 4;
  std::uint16_t total_len = be16(ip + 2);
  if (ihl < 20 || total_len < ihl || total_len > ip_avail) {
    ++stats_.malformed;
    return false;
  }
  std::uint16_t frag = be16(ip + 6);
  if ((frag & 0x3FFF) != 0) {  // fragmented datagrams are not selectable
    ++stats_.filtered_out;
    return false;
  }
  if (ip[9] != 17) {  // not UDP
    ++stats_.filtered_out;
    return false;
  }

  // UDP
  const std::uint8_t* udp = ip + ihl;
  std::size_t udp_avail = total_len - ihl;
  if (udp_avail < 8) {
    ++stats_.malformed;
    return false;
  }
  std::uint16_t dst_port = be16(udp + 2);
  std::uint16_t udp_len = be16(udp + 4);
  if (udp_len < 8 || udp_len > udp_avail) {
    ++stats_.malformed;
    return false;
  }
  if (dst_port != gsmtap_port_) {
    ++stats_.filtered_out;
    return false;
  }

  double frac = nanosecond_ ? ts_frac * 1e-9 : ts_frac * 1e-6;
  out.ts_utc = static_cast<double>(ts_sec) + frac;
  out.data.assign(udp + 8, udp + udp_len);
  return true;
}

}  // namespace gcw::capture
