// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcw/errors.hpp"

namespace gcw::gsmtap {

inline constexpr std::uint16_t kDefaultUdpPort = 4729;
inline constexpr std::uint8_t kVersion = 2;
inline constexpr std::size_t kFixedHeaderBytes = 16;

// GSMTAP payload types (octet 2). Only Um is decoded further downstream.
inline constexpr std::uint8_t kTypeUm = 0x01;

// Channel sub_type values used by the gr-gsm toolchain. 0x80 flags the
// associated (SACCH) variant of the base channel.
inline constexpr std::uint8_t kSubTypeAcchFlag = 0x80;

enum class ChannelType : std::uint8_t {
  Unknown,
  Bcch,
  Ccch,
  Rach,
  Agch,
  Pch,
  Sdcch,
  Sdcch4,
  Sdcch8,
  TchF,
  TchH,
  Sacch,
  Sacch4,
  Sacch8,
  SacchTchF,
  SacchTchH,
};

const char* channel_name(ChannelType type) noexcept;
ChannelType channel_from_subtype(std::uint8_t sub_type) noexcept;
std::uint8_t subtype_from_channel(ChannelType type) noexcept;
ChannelType channel_from_name(std::string_view name) noexcept;

bool is_sacch(ChannelType type) noexcept;
bool is_dedicated(ChannelType type) noexcept;  // SDCCH or SACCH variants

// One demodulated Um frame plus radio metadata, decoded from a GSMTAP v2
// datagram.
struct GsmtapFrame {
  std::uint8_t version = kVersion;
  std::uint8_t header_len_words = 4;
  std::uint8_t payload_type = kTypeUm;  // raw GSMTAP type octet
  std::uint8_t timeslot = 0;            // 0..7
  std::uint16_t arfcn = 0;              // channel number, flag bits stripped
  bool pcs_band = false;
  bool uplink = false;
  std::int8_t signal_dbm = 0;
  std::int8_t snr_db = 0;
  std::uint32_t frame_number = 0;
  std::uint8_t sub_type = 0;  // raw channel type octet (incl. SACCH flag)
  std::uint8_t antenna = 0;
  std::uint8_t sub_slot = 0;
  std::vector<std::uint8_t> payload;

  bool is_um() const noexcept { return payload_type == kTypeUm; }
  ChannelType channel() const noexcept { return channel_from_subtype(sub_type); }

  bool operator==(const GsmtapFrame&) const = default;
};

// Decodes the big-endian GSMTAP v2 header; payload is everything after
// header_len_words*4 bytes. Throws TooShort / UnsupportedVersion. A non-Um
// payload type is not an error: the frame is tagged and skippable downstream.
GsmtapFrame parse_gsmtap(std::span<const std::uint8_t> raw);

}  // namespace gcw::gsmtap
