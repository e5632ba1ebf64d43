// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "gcw/capture.hpp"
#include "gcw/gsmtap.hpp"

namespace gcw::capture {

struct CaptureStats {
  std::uint64_t yielded = 0;       // datagrams handed to the caller
  std::uint64_t filtered_out = 0;  // well-formed traffic that is not GSMTAP-port UDP
  std::uint64_t malformed = 0;     // truncated or inconsistent records, skipped
};

// Classic pcap reader (microsecond and nanosecond variants, either byte
// order). De-encapsulates Ethernet-II / IPv4 / UDP and yields datagrams whose
// destination port matches the configured GSMTAP port. Record timestamps come
// from the capture record headers. Other link types are rejected.
class PcapSource : public DatagramSource {
 public:
  explicit PcapSource(const std::string& path,
                      std::uint16_t gsmtap_port = gsmtap::kDefaultUdpPort);

  std::optional<Datagram> next() override;
  const CaptureStats& stats() const noexcept { return stats_; }

 private:
  bool read_record(Datagram& out);

  struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
      if (f) std::fclose(f);
    }
  };
  std::unique_ptr<std::FILE, FileCloser> file_;
  bool swapped_ = false;       // file byte order differs from host
  bool nanosecond_ = false;    // nanosecond timestamp variant
  bool done_ = false;
  std::uint16_t gsmtap_port_;
  CaptureStats stats_;
};

}  // namespace gcw::capture
