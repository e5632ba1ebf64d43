// SPDX-License-Identifier: MIT

#include "gcw/gsmtap.hpp"

#include <string_view>

namespace gcw::gsmtap {

namespace {

constexpr std::uint8_t kSubBcch = 0x01;
constexpr std::uint8_t kSubCcch = 0x02;
constexpr std::uint8_t kSubRach = 0x03;
constexpr std::uint8_t kSubAgch = 0x04;
constexpr std::uint8_t kSubPch = 0x05;
constexpr std::uint8_t kSubSdcch = 0x06;
constexpr std::uint8_t kSubSdcch4 = 0x07;
constexpr std::uint8_t kSubSdcch8 = 0x08;
constexpr std::uint8_t kSubTchF = 0x09;
constexpr std::uint8_t kSubTchH = 0x0A;

constexpr std::uint16_t kArfcnFlagPcs = 0x8000;
constexpr std::uint16_t kArfcnFlagUplink = 0x4000;
constexpr std::uint16_t kArfcnMask = 0x3FFF;

}  // namespace

const char* channel_name(ChannelType type) noexcept {
  switch (type) {
    case ChannelType::Bcch: return "BCCH";
    case ChannelType::Ccch: return "CCCH";
    case ChannelType::Rach: return "RACH";
    case ChannelType::Agch: return "AGCH";
    case ChannelType::Pch: return "PCH";
    case ChannelType::Sdcch: return "SDCCH";
    case ChannelType::Sdcch4: return "SDCCH4";
    case ChannelType::Sdcch8: return "SDCCH8";
    case ChannelType::TchF: return "TCH/F";
    case ChannelType::TchH: return "TCH/H";
    case ChannelType::Sacch: return "SACCH";
    case ChannelType::Sacch4: return "SACCH/4";
    case ChannelType::Sacch8: return "SACCH/8";
    case ChannelType::SacchTchF: return "SACCH/F";
    case ChannelType::SacchTchH: return "SACCH/H";
    case ChannelType::Unknown: break;
  }
  return "UNKNOWN";
}

ChannelType channel_from_subtype(std::uint8_t sub_type) noexcept {
  bool acch = (sub_type & kSubTypeAcchFlag) != 0;
  switch (sub_type & ~kSubTypeAcchFlag) {
    case kSubBcch: return acch ? ChannelType::Unknown : ChannelType::Bcch;
    case kSubCcch: return acch ? ChannelType::Unknown : ChannelType::Ccch;
    case kSubRach: return acch ? ChannelType::Unknown : ChannelType::Rach;
    case kSubAgch: return acch ? ChannelType::Unknown : ChannelType::Agch;
    case kSubPch: return acch ? ChannelType::Unknown : ChannelType::Pch;
    case kSubSdcch: return acch ? ChannelType::Sacch : ChannelType::Sdcch;
    case kSubSdcch4: return acch ? ChannelType::Sacch4 : ChannelType::Sdcch4;
    case kSubSdcch8: return acch ? ChannelType::Sacch8 : ChannelType::Sdcch8;
    case kSubTchF: return acch ? ChannelType::SacchTchF : ChannelType::TchF;
    case kSubTchH: return acch ? ChannelType::SacchTchH : ChannelType::TchH;
    default: return ChannelType::Unknown;
  }
}

std::uint8_t subtype_from_channel(ChannelType type) noexcept {
  switch (type) {
    case ChannelType::Bcch: return kSubBcch;
    case ChannelType::Ccch: return kSubCcch;
    case ChannelType::Rach: return kSubRach;
    case ChannelType::Agch: return kSubAgch;
    case ChannelType::Pch: return kSubPch;
    case ChannelType::Sdcch: return kSubSdcch;
    case ChannelType::Sdcch4: return kSubSdcch4;
    case ChannelType::Sdcch8: return kSubSdcch8;
    case ChannelType::TchF: return kSubTchF;
    case ChannelType::TchH: return kSubTchH;
    case ChannelType::Sacch: return kSubTypeAcchFlag | kSubSdcch;
    case ChannelType::Sacch4: return kSubTypeAcchFlag | kSubSdcch4;
    case ChannelType::Sacch8: return kSubTypeAcchFlag | kSubSdcch8;
    case ChannelType::SacchTchF: return kSubTypeAcchFlag | kSubTchF;
    case ChannelType::SacchTchH: return kSubTypeAcchFlag | kSubTchH;
    case ChannelType::Unknown: break;
  }
  return 0;
}

ChannelType channel_from_name(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ChannelType::SacchTchH); ++i) {
    auto t = static_cast<ChannelType>(i);
    if (name == channel_name(t)) return t;
  }
  return ChannelType::Unknown;
}

bool is_sacch(ChannelType type) noexcept {
  switch (type) {
    case ChannelType::Sacch:
    case ChannelType::Sacch4:
    case ChannelType::Sacch8:
    case ChannelType::SacchTchF:
    case ChannelType::SacchTchH: return true;
    default: return false;
  }
}

bool is_dedicated(ChannelType type) noexcept {
  switch (type) {
    case ChannelType::Sdcch:
    case ChannelType::Sdcch4:
    case ChannelType::Sdcch8: return true;
    default: return is_sacch(type);
  }
}

GsmtapFrame parse_gsmtap(std::span<const std::uint8_t> raw) {
  if (raw.size() < kFixedHeaderBytes) {
    raise(Errc::too_short, "datagram of " + std::to_string(raw.size()) +
                               " bytes is shorter than the 16-byte GSMTAP header");
  }
  GsmtapFrame f;
  f.version = raw[0];
  if (f.version != kVersion) {
    raise(Errc::unsupported_version, "GSMTAP version " + std::to_string(f.version));
  }
  f.header_len_words = raw[1];
  std::size_t header_bytes = static_cast<std::size_t>(f.header_len_words) * 4;
  if (header_bytes < kFixedHeaderBytes) {
    raise(Errc::too_short, "declared header length " + std::to_string(header_bytes) +
                               " bytes is shorter than the fixed GSMTAP v2 part");
  }
  if (raw.size() < header_bytes) {
    raise(Errc::too_short, "datagram shorter than its declared header length");
  }
  f.payload_type = raw[2];
  f.timeslot = raw[3];
  std::uint16_t arfcn_field = static_cast<std::uint16_t>((raw[4] << 8) | raw[5]);
  f.pcs_band = (arfcn_field & kArfcnFlagPcs) != 0;
  f.uplink = (arfcn_field & kArfcnFlagUplink) != 0;
  f.arfcn = arfcn_field & kArfcnMask;
  f.signal_dbm = static_cast<std::int8_t>(raw[6]);
  f.snr_db = static_cast<std::int8_t>(raw[7]);
  f.frame_number = (static_cast<std::uint32_t>(raw[8]) << 24) |
                   (static_cast<std::uint32_t>(raw[9]) << 16) |
                   (static_cast<std::uint32_t>(raw[10]) << 8) | raw[11];
  f.sub_type = raw[12];
  f.antenna = raw[13];
  f.sub_slot = raw[14];
  f.payload.assign(raw.begin() + static_cast<std::ptrdiff_t>(header_bytes), raw.end());
  return f;
}

}  // namespace gcw::gsmtap
