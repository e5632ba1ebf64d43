// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>

#include "gcw/errors.hpp"

namespace gcw::monitor {

// E-GSM 900 channel arithmetic. Valid ARFCNs are 0..124 and 975..1023; the
// produced downlink frequencies all fall inside the 925.0-960.0 MHz band.
inline constexpr std::int64_t kChannelSpacingHz = 200'000;
inline constexpr std::int64_t kDownlinkBaseHz = 935'000'000;
inline constexpr std::int64_t kDuplexSpacingHz = 45'000'000;

bool arfcn_valid_egsm(std::uint32_t arfcn) noexcept;

std::int64_t arfcn_to_downlink_hz(std::uint32_t arfcn);  // throws InvalidArfcn
std::int64_t arfcn_to_uplink_hz(std::uint32_t arfcn);    // downlink - 45 MHz
std::uint16_t arfcn_from_downlink_hz(std::int64_t hz);   // inverse, throws InvalidArfcn

}  // namespace gcw::monitor
