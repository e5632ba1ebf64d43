// SPDX-License-Identifier: MIT

#include "gcw/scan.hpp"

#include <cmath>
#include <regex>
#include <string>

#include "gcw/arfcn.hpp"

namespace gcw::monitor {

ScanResult parse_scan_output(std::string_view text) {
  static const std::regex line_re(
      R"(chan:\s*(\d+)\s*\(\s*([0-9]+(?:\.[0-9]+)?)\s*MHz\s*[+-]\s*[0-9]+(?:\.[0-9]+)?\s*k?Hz\s*\)\s*power:\s*([0-9]+(?:\.[0-9]+)?))");

  ScanResult result;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

    // Trim whitespace-only lines without counting them.
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::smatch m;
    if (!std::regex_search(line, m, line_re)) {
      ++result.ignored_lines;
      continue;
    }
    unsigned long chan = std::stoul(m[1].str());
    if (chan > 1023 || !arfcn_valid_egsm(static_cast<std::uint32_t>(chan))) {
      ++result.ignored_lines;
      continue;
    }
    ScanEntry entry;
    entry.arfcn = static_cast<std::uint16_t>(chan);
    entry.downlink_hz = static_cast<std::int64_t>(std::llround(std::stod(m[2].str()) * 1e6));
    entry.power = std::stod(m[3].str());
    result.entries.push_back(entry);
  }
  return result;
}

}  // namespace gcw::monitor
