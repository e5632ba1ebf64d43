// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gcw/errors.hpp"
#include "gcw/gsmtap.hpp"

namespace gcw::um {

// A5 cipher variants selectable by a Cipher Mode Command. "A5/0" (no
// ciphering) is represented by an absent algorithm, never by this enum.
enum class CipherAlgo : std::uint8_t {
  A5_1 = 1,
  A5_2 = 2,
  A5_3 = 3,
  A5_4 = 4,
  A5_5 = 5,
  A5_6 = 6,
  A5_7 = 7,
};

// Algorithm-identifier bits (0..7) map to variant index bits+1.
CipherAlgo algo_from_identifier_bits(std::uint8_t bits) noexcept;
std::string algo_name(CipherAlgo algo);  // "A5/<n>"
std::optional<CipherAlgo> algo_from_name(std::string_view name) noexcept;

// Outcome of a Cipher Mode Command. algo empty = "start ciphering not
// commanded" (SC bit clear). cipher_response is the raw high nibble of the
// cipher-mode octet (IMEISV request), retained undecoded.
struct CipherDecision {
  std::optional<CipherAlgo> algo;
  std::uint8_t cipher_response = 0;

  bool starts_ciphering() const noexcept { return algo.has_value(); }
  bool operator==(const CipherDecision&) const = default;
};

// Cell identity broadcast in System Information Type 3.
struct Si3Info {
  std::uint16_t cell_id = 0;
  std::string mcc;  // exactly 3 digits
  std::string mnc;  // 2 or 3 digits, count preserved
  std::uint16_t lac = 0;

  bool operator==(const Si3Info&) const = default;
};

struct OtherMessage {
  std::uint8_t protocol_discriminator = 0;
  std::uint8_t message_type = 0;

  bool operator==(const OtherMessage&) const = default;
};

using RRMessage = std::variant<Si3Info, CipherDecision, OtherMessage>;

// L2 fill octet used after the L3 content of signalling frames.
inline constexpr std::uint8_t kPaddingOctet = 0x2B;
inline constexpr std::size_t kSignallingFrameBytes = 23;

// Decoded 23-octet signalling frame framing. BCCH/CCCH traffic uses the
// pseudo-length format, dedicated channels LAPDm format B. Padding bytes are
// preserved verbatim; padding_is_canonical records whether they are all 0x2B
// (sources may randomize padding).
struct L2Payload {
  enum class Format { bcch_pseudo_length, lapdm_b };

  Format format = Format::bcch_pseudo_length;
  std::uint8_t pseudo_length = 0;                          // pseudo-length format only
  std::uint8_t address = 0, control = 0, length_indicator = 0;  // LAPDm B only, raw octets
  std::vector<std::uint8_t> l3;
  std::vector<std::uint8_t> padding;
  bool padding_is_canonical = true;

  bool lapdm_el() const noexcept { return (length_indicator & 0x01) != 0; }
  bool lapdm_more() const noexcept { return (length_indicator & 0x02) != 0; }
};

L2Payload parse_l2(const gsmtap::GsmtapFrame& frame);

// Cipher Mode Setting half-octet: bit 1 is the SC flag, bits 4..2 the
// algorithm identifier. Total on 0..15.
std::optional<CipherAlgo> decode_cipher_mode_setting(std::uint8_t nibble) noexcept;

struct Lai {
  std::string mcc;
  std::string mnc;
  std::uint16_t lac = 0;

  bool operator==(const Lai&) const = default;
};

// Location Area Identification: 5 octets of nibble-swapped BCD plus LAC.
Lai decode_lai(std::span<const std::uint8_t> octets);

RRMessage parse_rr(std::span<const std::uint8_t> l3);

struct UmMessage {
  L2Payload l2;
  RRMessage rr;
};

// Convenience: L2 + L3 decoding of one Um signalling frame.
UmMessage decode(const gsmtap::GsmtapFrame& frame);

}  // namespace gcw::um
