// SPDX-License-Identifier: MIT

#include "gcw/a5.hpp"

#include <bit>

namespace gcw::a5 {

namespace {

constexpr std::uint32_t kMaskR1 = 0x07FFFF;
constexpr std::uint32_t kMaskR2 = 0x3FFFFF;
constexpr std::uint32_t kMaskR3 = 0x7FFFFF;

constexpr std::uint32_t kTapsR1 = (1u << 13) | (1u << 16) | (1u << 17) | (1u << 18);
constexpr std::uint32_t kTapsR2 = (1u << 20) | (1u << 21);
constexpr std::uint32_t kTapsR3 = (1u << 7) | (1u << 20) | (1u << 21) | (1u << 22);

constexpr std::uint32_t kClockR1 = 1u << 8;
constexpr std::uint32_t kClockR2 = 1u << 10;
constexpr std::uint32_t kClockR3 = 1u << 10;

inline std::uint32_t parity(std::uint32_t v) noexcept {
  return static_cast<std::uint32_t>(std::popcount(v)) & 1u;
}

inline std::uint32_t step(std::uint32_t reg, std::uint32_t mask, std::uint32_t taps,
                          std::uint32_t input) noexcept {
  std::uint32_t feedback = parity(reg & taps) ^ input;
  return ((reg << 1) | feedback) & mask;
}

inline void clock_all(A5State& s, std::uint32_t input) noexcept {
  s.r1 = step(s.r1, kMaskR1, kTapsR1, input);
  s.r2 = step(s.r2, kMaskR2, kTapsR2, input);
  s.r3 = step(s.r3, kMaskR3, kTapsR3, input);
}

inline void clock_majority(A5State& s) noexcept {
  std::uint32_t c1 = (s.r1 & kClockR1) ? 1u : 0u;
  std::uint32_t c2 = (s.r2 & kClockR2) ? 1u : 0u;
  std::uint32_t c3 = (s.r3 & kClockR3) ? 1u : 0u;
  std::uint32_t maj = (c1 + c2 + c3 >= 2) ? 1u : 0u;
  if (c1 == maj) s.r1 = step(s.r1, kMaskR1, kTapsR1, 0);
  if (c2 == maj) s.r2 = step(s.r2, kMaskR2, kTapsR2, 0);
  if (c3 == maj) s.r3 = step(s.r3, kMaskR3, kTapsR3, 0);
}

inline std::uint32_t output_bit(const A5State& s) noexcept {
  return ((s.r1 >> 18) ^ (s.r2 >> 21) ^ (s.r3 >> 22)) & 1u;
}

}  // namespace

std::uint64_t A5State::packed() const noexcept {
  return static_cast<std::uint64_t>(r1 & kMaskR1) |
         (static_cast<std::uint64_t>(r2 & kMaskR2) << 19) |
         (static_cast<std::uint64_t>(r3 & kMaskR3) << 41);
}

A5State A5State::from_packed(std::uint64_t bits) noexcept {
  A5State s;
  s.r1 = static_cast<std::uint32_t>(bits) & kMaskR1;
  s.r2 = static_cast<std::uint32_t>(bits >> 19) & kMaskR2;
  s.r3 = static_cast<std::uint32_t>(bits >> 41) & kMaskR3;
  return s;
}

FrameCount::FrameCount(std::uint32_t value) : value_(value) {
  if (value >= (1u << 22)) {
    raise(Errc::frame_number_out_of_range, "count does not fit in 22 bits");
  }
}

int Keystream::bit(int index) const {
  const auto& block = index < 114 ? downlink : uplink;
  int i = index < 114 ? index : index - 114;
  return (block[static_cast<std::size_t>(i / 8)] >> (7 - (i & 7))) & 1;
}

int majority(int a, int b, int c) noexcept { return (a + b + c >= 2) ? 1 : 0; }

A5State a5_init(SessionKey key, FrameCount count) noexcept {
  A5State s;
  for (int i = 0; i < 64; ++i) clock_all(s, static_cast<std::uint32_t>(key.kc >> i) & 1u);
  for (int i = 0; i < 22; ++i) clock_all(s, (count.value() >> i) & 1u);
  return s;
}

Keystream a5_keystream(A5State state) noexcept {
  for (int i = 0; i < 100; ++i) clock_majority(state);
  Keystream out;
  for (int i = 0; i < 114; ++i) {
    clock_majority(state);
    out.downlink[static_cast<std::size_t>(i / 8)] |=
        static_cast<std::uint8_t>(output_bit(state) << (7 - (i & 7)));
  }
  for (int i = 0; i < 114; ++i) {
    clock_majority(state);
    out.uplink[static_cast<std::size_t>(i / 8)] |=
        static_cast<std::uint8_t>(output_bit(state) << (7 - (i & 7)));
  }
  return out;
}

namespace {

// Inverse of the affine loading phase. The key-to-state map A and the
// count-to-state map B are probed on basis vectors; A is inverted by
// Gauss-Jordan elimination over GF(2) with rows held as 64-bit words.
class LoadingInverse {
 public:
  static const LoadingInverse& instance() {
    static const LoadingInverse inv;
    return inv;
  }

  SessionKey solve(const A5State& state, FrameCount count) const {
    std::uint64_t y = state.packed();
    for (int j = 0; j < 22; ++j) {
      if ((count.value() >> j) & 1u) y ^= count_image_[static_cast<std::size_t>(j)];
    }
    std::uint64_t kc = 0;
    for (int r = 0; r < 64; ++r) {
      std::uint64_t bit = static_cast<std::uint64_t>(std::popcount(inverse_rows_[static_cast<std::size_t>(r)] & y)) & 1u;
      kc |= bit << r;
    }
    return SessionKey{kc};
  }

 private:
  LoadingInverse() {
    std::array<std::uint64_t, 64> key_image{};
    for (int i = 0; i < 64; ++i) {
      key_image[static_cast<std::size_t>(i)] =
          a5_init(SessionKey{1ull << i}, FrameCount{0}).packed();
    }
    for (int j = 0; j < 22; ++j) {
      count_image_[static_cast<std::size_t>(j)] =
          a5_init(SessionKey{0}, FrameCount{1u << j}).packed();
    }

    // rows[r] bit c = bit r of key_image[c]
    std::array<std::uint64_t, 64> rows{};
    for (int r = 0; r < 64; ++r) {
      std::uint64_t row = 0;
      for (int c = 0; c < 64; ++c) {
        row |= ((key_image[static_cast<std::size_t>(c)] >> r) & 1ull) << c;
      }
      rows[static_cast<std::size_t>(r)] = row;
      inverse_rows_[static_cast<std::size_t>(r)] = 1ull << r;  // identity augmentation
    }

    for (int col = 0; col < 64; ++col) {
      int pivot = -1;
      for (int r = col; r < 64; ++r) {
        if ((rows[static_cast<std::size_t>(r)] >> col) & 1ull) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) {
        raise(Errc::not_invertible, "loading-phase matrix is singular");
      }
      std::swap(rows[static_cast<std::size_t>(pivot)], rows[static_cast<std::size_t>(col)]);
      std::swap(inverse_rows_[static_cast<std::size_t>(pivot)],
                inverse_rows_[static_cast<std::size_t>(col)]);
      for (int r = 0; r < 64; ++r) {
        if (r != col && ((rows[static_cast<std::size_t>(r)] >> col) & 1ull)) {
          rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(col)];
          inverse_rows_[static_cast<std::size_t>(r)] ^= inverse_rows_[static_cast<std::size_t>(col)];
        }
      }
    }
  }

  std::array<std::uint64_t, 64> inverse_rows_{};
  std::array<std::uint64_t, 22> count_image_{};
};

}  // namespace

SessionKey recover_kc(const A5State& state, FrameCount count) {
  return LoadingInverse::instance().solve(state, count);
}

FrameCount count_from_fn(std::uint32_t frame_number) {
  if (frame_number >= kHyperframeFrames) {
    raise(Errc::frame_number_out_of_range,
          "frame number " + std::to_string(frame_number) + " >= hyperframe length");
  }
  std::uint32_t t1 = frame_number / 1326u;  // 11 bits
  std::uint32_t t3 = frame_number % 51u;    // 6 bits
  std::uint32_t t2 = frame_number % 26u;    // 5 bits
  return FrameCount{(t1 << 11) | (t3 << 5) | t2};
}

std::vector<std::uint8_t> recover_keystream(std::span<const std::uint8_t> ciphertext,
                                            std::span<const std::uint8_t> plaintext) {
  if (ciphertext.size() != plaintext.size()) {
    raise(Errc::length_mismatch, "ciphertext and plaintext lengths differ");
  }
  std::vector<std::uint8_t> out(ciphertext.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ciphertext[i] ^ plaintext[i];
  return out;
}

}  // namespace gcw::a5
