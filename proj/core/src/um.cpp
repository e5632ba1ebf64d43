// SPDX-License-Identifier: MIT

#include "gcw/um.hpp"

#include <algorithm>

namespace gcw::um {

namespace {

constexpr std::uint8_t kPdRadioResource = 0x06;
constexpr std::uint8_t kMtSystemInformation3 = 0x1B;
constexpr std::uint8_t kMtCipherModeCommand = 0x35;

// Mandatory fixed parts we decode: PD+MT, cell identity, LAI.
constexpr std::size_t kSi3FixedBytes = 2 + 2 + 5;
constexpr std::size_t kCmcFixedBytes = 3;

char bcd_digit(std::uint8_t nibble, const char* what) {
  if (nibble > 9) {
    raise(Errc::bad_bcd, std::string(what) + " nibble 0x" + "0123456789abcdef"[nibble] + " is not a decimal digit");
  }
  return static_cast<char>('0' + nibble);
}

}  // namespace

CipherAlgo algo_from_identifier_bits(std::uint8_t bits) noexcept {
  return static_cast<CipherAlgo>((bits & 0x07) + 1);
}

std::string algo_name(CipherAlgo algo) {
  return "A5/" + std::to_string(static_cast<int>(algo));
}

std::optional<CipherAlgo> algo_from_name(std::string_view name) noexcept {
  if (name.size() == 4 && name.substr(0, 3) == "A5/" && name[3] >= '1' && name[3] <= '7') {
    return static_cast<CipherAlgo>(name[3] - '0');
  }
  return std::nullopt;
}

L2Payload parse_l2(const gsmtap::GsmtapFrame& frame) {
  const auto& p = frame.payload;
  if (p.size() != kSignallingFrameBytes) {
    raise(Errc::bad_length,
          "signalling frame must be 23 octets, got " + std::to_string(p.size()));
  }

  L2Payload out;
  auto channel = frame.channel();
  switch (channel) {
    case gsmtap::ChannelType::Bcch:
    case gsmtap::ChannelType::Ccch:
    case gsmtap::ChannelType::Pch:
    case gsmtap::ChannelType::Agch: {
      if ((p[0] & 0x03) != 0x01) {
        raise(Errc::malformed_header, "pseudo-length flag bits are not 0b01");
      }
      out.format = L2Payload::Format::bcch_pseudo_length;
      out.pseudo_length = static_cast<std::uint8_t>(p[0] >> 2);
      if (out.pseudo_length > kSignallingFrameBytes - 1) {
        raise(Errc::malformed_header, "pseudo length " + std::to_string(out.pseudo_length) +
                                          " exceeds the remaining 22 octets");
      }
      out.l3.assign(p.begin() + 1, p.begin() + 1 + out.pseudo_length);
      out.padding.assign(p.begin() + 1 + out.pseudo_length, p.end());
      break;
    }
    case gsmtap::ChannelType::Sdcch:
    case gsmtap::ChannelType::Sdcch4:
    case gsmtap::ChannelType::Sdcch8:
    case gsmtap::ChannelType::Sacch:
    case gsmtap::ChannelType::Sacch4:
    case gsmtap::ChannelType::Sacch8:
    case gsmtap::ChannelType::SacchTchF:
    case gsmtap::ChannelType::SacchTchH: {
      out.format = L2Payload::Format::lapdm_b;
      out.address = p[0];
      out.control = p[1];
      out.length_indicator = p[2];
      std::uint8_t l3_len = static_cast<std::uint8_t>(out.length_indicator >> 2);
      if (l3_len > kSignallingFrameBytes - 3) {
        raise(Errc::malformed_header, "LAPDm length indicator declares " +
                                          std::to_string(l3_len) + " L3 octets in a 23-octet frame");
      }
      out.l3.assign(p.begin() + 3, p.begin() + 3 + l3_len);
      out.padding.assign(p.begin() + 3 + l3_len, p.end());
      break;
    }
    default:
      raise(Errc::unsupported_channel,
            std::string("no L2 decoding for channel ") + gsmtap::channel_name(channel));
  }
  out.padding_is_canonical =
      std::all_of(out.padding.begin(), out.padding.end(),
                  [](std::uint8_t b) { return b == kPaddingOctet; });
  return out;
}

std::optional<CipherAlgo> decode_cipher_mode_setting(std::uint8_t nibble) noexcept {
  nibble &= 0x0F;
  if ((nibble & 0x01) == 0) return std::nullopt;  // SC clear: no ciphering
  return algo_from_identifier_bits(static_cast<std::uint8_t>(nibble >> 1));
}

Lai decode_lai(std::span<const std::uint8_t> octets) {
  if (octets.size() != 5) {
    raise(Errc::bad_length, "LAI must be 5 octets, got " + std::to_string(octets.size()));
  }
  Lai lai;
  lai.mcc.push_back(bcd_digit(octets[0] & 0x0F, "MCC"));
  lai.mcc.push_back(bcd_digit(octets[0] >> 4, "MCC"));
  lai.mcc.push_back(bcd_digit(octets[1] & 0x0F, "MCC"));
  std::uint8_t mnc3 = octets[1] >> 4;
  lai.mnc.push_back(bcd_digit(octets[2] & 0x0F, "MNC"));
  lai.mnc.push_back(bcd_digit(octets[2] >> 4, "MNC"));
  if (mnc3 != 0x0F) {
    lai.mnc.push_back(bcd_digit(mnc3, "MNC"));
  }
  lai.lac = static_cast<std::uint16_t>((octets[3] << 8) | octets[4]);
  return lai;
}

RRMessage parse_rr(std::span<const std::uint8_t> l3) {
  if (l3.size() < 2) {
    raise(Errc::truncated, "L3 message shorter than the 2-octet PD/MT part");
  }
  std::uint8_t pd = static_cast<std::uint8_t>(l3[0] & 0x0F);
  std::uint8_t skip = static_cast<std::uint8_t>(l3[0] >> 4);
  std::uint8_t mt = l3[1];
  if (pd != kPdRadioResource || skip != 0) {
    return OtherMessage{pd, mt};
  }
  switch (mt) {
    case kMtSystemInformation3: {
      if (l3.size() < kSi3FixedBytes) {
        raise(Errc::truncated, "SI3 shorter than its mandatory fixed part");
      }
      Si3Info info;
      info.cell_id = static_cast<std::uint16_t>((l3[2] << 8) | l3[3]);
      Lai lai = decode_lai(l3.subspan(4, 5));
      info.mcc = std::move(lai.mcc);
      info.mnc = std::move(lai.mnc);
      info.lac = lai.lac;
      return info;  // trailing IEs ignored
    }
    case kMtCipherModeCommand: {
      if (l3.size() < kCmcFixedBytes) {
        raise(Errc::truncated, "Cipher Mode Command shorter than 3 octets");
      }
      CipherDecision decision;
      decision.algo = decode_cipher_mode_setting(static_cast<std::uint8_t>(l3[2] & 0x0F));
      decision.cipher_response = static_cast<std::uint8_t>(l3[2] >> 4);
      return decision;
    }
    default:
      return OtherMessage{pd, mt};
  }
}

UmMessage decode(const gsmtap::GsmtapFrame& frame) {
  UmMessage msg;
  msg.l2 = parse_l2(frame);
  msg.rr = parse_rr(msg.l2.l3);
  return msg;
}

}  // namespace gcw::um
