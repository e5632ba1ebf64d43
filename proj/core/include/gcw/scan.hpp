// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gcw::monitor {

struct ScanEntry {
  std::uint16_t arfcn = 0;
  std::int64_t downlink_hz = 0;
  double power = 0;  // relative linear units, comparable within one scan
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  std::uint64_t ignored_lines = 0;
};

// Parses kalibrate-style scanner output: one entry per line of the form
//   chan: 20 (939.0MHz - 270Hz) power: 84420.57
// Unmatched lines and entries outside E-GSM 900 are ignored and counted.
ScanResult parse_scan_output(std::string_view text);

}  // namespace gcw::monitor
