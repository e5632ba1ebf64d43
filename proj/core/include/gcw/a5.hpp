// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gcw/errors.hpp"

namespace gcw::a5 {

// Three-register LFSR state. Bit 0 of each register is the input end where
// feedback is inserted; the highest bit is the output tap.
struct A5State {
  std::uint32_t r1 = 0;  // 19 bits, taps {13,16,17,18}, clock bit 8
  std::uint32_t r2 = 0;  // 22 bits, taps {20,21},       clock bit 10
  std::uint32_t r3 = 0;  // 23 bits, taps {7,20,21,22},  clock bit 10

  bool operator==(const A5State&) const = default;

  // Canonical 64-bit packing: r1 | r2<<19 | r3<<41.
  std::uint64_t packed() const noexcept;
  static A5State from_packed(std::uint64_t bits) noexcept;
};

struct SessionKey {
  std::uint64_t kc = 0;
  bool operator==(const SessionKey&) const = default;
};

// 22-bit per-frame IV composed from the GSM frame number.
class FrameCount {
 public:
  FrameCount() = default;
  explicit FrameCount(std::uint32_t value);
  std::uint32_t value() const noexcept { return value_; }
  bool operator==(const FrameCount&) const = default;

 private:
  std::uint32_t value_ = 0;
};

// 228 keystream bits: 114 for the downlink burst, 114 for the uplink burst,
// packed MSB-first (low 6 bits of the last byte are zero).
struct Keystream {
  std::array<std::uint8_t, 15> downlink{};
  std::array<std::uint8_t, 15> uplink{};

  bool operator==(const Keystream&) const = default;
  int bit(int index) const;  // index in [0, 228)
};

int majority(int a, int b, int c) noexcept;

// Loads kc then count LSB-first into the zeroed registers, clocking all three
// registers once per bit with the bit XORed into each feedback. Returns the
// pre-mixing "initial state".
A5State a5_init(SessionKey key, FrameCount count) noexcept;

// 100 majority-clocked mixing rounds (output discarded) followed by 228
// majority-clocked output rounds.
Keystream a5_keystream(A5State state) noexcept;

// Back-clocks the loading phase: recovers the session key that produced
// `state` under `count`. The loading phase is affine over GF(2); its matrix
// inverse is precomputed on first use (NotInvertible would indicate broken
// register constants).
SessionKey recover_kc(const A5State& state, FrameCount count);

inline constexpr std::uint32_t kHyperframeFrames = 26u * 51u * 2048u;  // 2715648

// COUNT = T1<<11 | T3<<5 | T2 with T1 = fn div 1326, T3 = fn mod 51,
// T2 = fn mod 26.
FrameCount count_from_fn(std::uint32_t frame_number);

// Known-plaintext keystream recovery: bytewise XOR of equal-length buffers.
std::vector<std::uint8_t> recover_keystream(std::span<const std::uint8_t> ciphertext,
                                            std::span<const std::uint8_t> plaintext);

}  // namespace gcw::a5
