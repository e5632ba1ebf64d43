// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gcw/gsmtap.hpp"
#include "gcw/um.hpp"

// Test-harness encoders: the independent construction side of the decode
// roundtrips. Built from the wire-format definitions, not from the parsers.
namespace gcw::testsupport {

std::vector<std::uint8_t> encode_gsmtap(const gsmtap::GsmtapFrame& frame);

std::array<std::uint8_t, 5> encode_lai(const std::string& mcc, const std::string& mnc,
                                       std::uint16_t lac);

// L3 message bodies.
std::vector<std::uint8_t> si3_l3(std::uint16_t cell_id, const std::string& mcc,
                                 const std::string& mnc, std::uint16_t lac);
std::vector<std::uint8_t> cmc_l3(std::uint8_t cipher_mode_setting,
                                 std::uint8_t cipher_response = 0);

// 23-octet L2 frames.
std::vector<std::uint8_t> l2_pseudo_length(std::span<const std::uint8_t> l3,
                                           std::uint8_t pad = um::kPaddingOctet);
std::vector<std::uint8_t> l2_lapdm_b(std::span<const std::uint8_t> l3,
                                     std::uint8_t address = 0x03, std::uint8_t control = 0x00,
                                     std::uint8_t pad = um::kPaddingOctet);

// Ready-made Um frames.
gsmtap::GsmtapFrame si3_frame(std::uint16_t arfcn, std::uint32_t frame_number,
                              std::uint16_t cell_id, const std::string& mcc,
                              const std::string& mnc, std::uint16_t lac);
gsmtap::GsmtapFrame cmc_frame(std::uint16_t arfcn, std::uint32_t frame_number,
                              std::uint8_t cipher_mode_setting,
                              gsmtap::ChannelType channel = gsmtap::ChannelType::Sdcch8);
gsmtap::GsmtapFrame paging_frame(std::uint16_t arfcn, std::uint32_t frame_number);

// Uniformly random well-formed frame for roundtrip properties.
gsmtap::GsmtapFrame random_frame(std::mt19937_64& rng);

}  // namespace gcw::testsupport
