// SPDX-License-Identifier: MIT

#include "gcw/arfcn.hpp"

#include <string>

namespace gcw::monitor {

bool arfcn_valid_egsm(std::uint32_t arfcn) noexcept {
  return arfcn <= 124 || (arfcn >= 975 && arfcn <= 1023);
}

std::int64_t arfcn_to_downlink_hz(std::uint32_t arfcn) {
  if (!arfcn_valid_egsm(arfcn)) {
    raise(Errc::invalid_arfcn,
          "ARFCN " + std::to_string(arfcn) + " is outside E-GSM 900 (0-124, 975-1023)");
  }
  std::int64_t n = (arfcn <= 124) ? static_cast<std::int64_t>(arfcn)
                                  : static_cast<std::int64_t>(arfcn) - 1024;
  return kDownlinkBaseHz + kChannelSpacingHz * n;
}

std::int64_t arfcn_to_uplink_hz(std::uint32_t arfcn) {
  return arfcn_to_downlink_hz(arfcn) - kDuplexSpacingHz;
}

std::uint16_t arfcn_from_downlink_hz(std::int64_t hz) {
  std::int64_t offset = hz - kDownlinkBaseHz;
  if (offset % kChannelSpacingHz != 0) {
    raise(Errc::invalid_arfcn, std::to_string(hz) + " Hz is not on the 200 kHz channel grid");
  }
  std::int64_t n = offset / kChannelSpacingHz;
  if (n >= 0 && n <= 124) return static_cast<std::uint16_t>(n);
  if (n >= -49 && n < 0) return static_cast<std::uint16_t>(n + 1024);
  raise(Errc::invalid_arfcn, std::to_string(hz) + " Hz is outside the E-GSM 900 downlink band");
}

}  // namespace gcw::monitor
