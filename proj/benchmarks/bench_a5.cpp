// SPDX-License-Identifier: MIT

#include <benchmark/benchmark.h>

#include "gcw/a5.hpp"

using namespace gcw;

static void BM_A5Init(benchmark::State& state) {
  std::uint64_t kc = 0x0123456789ABCDEFull;
  std::uint32_t count = 0;
  for (auto _ : state) {
    auto s = a5::a5_init(a5::SessionKey{kc}, a5::FrameCount{count});
    benchmark::DoNotOptimize(s);
    count = (count + 1) & 0x3FFFFF;
  }
}
BENCHMARK(BM_A5Init);

static void BM_A5Keystream(benchmark::State& state) {
  auto s = a5::a5_init(a5::SessionKey{0x0123456789ABCDEFull}, a5::FrameCount{0x134});
  for (auto _ : state) {
    auto ks = a5::a5_keystream(s);
    benchmark::DoNotOptimize(ks);
  }
}
BENCHMARK(BM_A5Keystream);

static void BM_A5RecoverKc(benchmark::State& state) {
  auto s = a5::a5_init(a5::SessionKey{0x0123456789ABCDEFull}, a5::FrameCount{0x134});
  a5::FrameCount count{0x134};
  for (auto _ : state) {
    auto kc = a5::recover_kc(s, count);
    benchmark::DoNotOptimize(kc);
  }
}
BENCHMARK(BM_A5RecoverKc);
