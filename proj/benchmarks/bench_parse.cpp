// SPDX-License-Identifier: MIT

#include <benchmark/benchmark.h>

#include <vector>

#include "gcw/gsmtap.hpp"
#include "gcw/um.hpp"

using namespace gcw;

namespace {

// Minimal frame builders, enough to drive the decoders.
std::vector<std::uint8_t> gsmtap_header(std::uint8_t sub_type) {
  return {0x02, 0x04, 0x01, 0x00, 0x00, 0x14, 0xBA, 0x12,
          0x00, 0x00, 0x12, 0x34, sub_type, 0x00, 0x00, 0x00};
}

std::vector<std::uint8_t> si3_datagram() {
  auto bytes = gsmtap_header(0x01);  // BCCH
  std::vector<std::uint8_t> l3 = {0x06, 0x1B, 0x27, 0x10, 0x62, 0xF2, 0x10, 0x27, 0x5B,
                                  0x01, 0x03, 0x00, 0x65, 0x40, 0x79, 0x00, 0x00, 0x80};
  bytes.push_back(static_cast<std::uint8_t>((l3.size() << 2) | 0x01));
  bytes.insert(bytes.end(), l3.begin(), l3.end());
  bytes.resize(16 + 23, um::kPaddingOctet);
  return bytes;
}

std::vector<std::uint8_t> cmc_datagram() {
  auto bytes = gsmtap_header(0x08);  // SDCCH8
  bytes.push_back(0x03);
  bytes.push_back(0x00);
  bytes.push_back((3 << 2) | 0x01);
  bytes.push_back(0x06);
  bytes.push_back(0x35);
  bytes.push_back(0x05);
  bytes.resize(16 + 23, um::kPaddingOctet);
  return bytes;
}

}  // namespace

static void BM_ParseGsmtap(benchmark::State& state) {
  auto bytes = si3_datagram();
  for (auto _ : state) {
    auto frame = gsmtap::parse_gsmtap(bytes);
    benchmark::DoNotOptimize(frame);
  }
}
BENCHMARK(BM_ParseGsmtap);

static void BM_DecodeSi3(benchmark::State& state) {
  auto frame = gsmtap::parse_gsmtap(si3_datagram());
  for (auto _ : state) {
    auto msg = um::decode(frame);
    benchmark::DoNotOptimize(msg);
  }
}
BENCHMARK(BM_DecodeSi3);

static void BM_DecodeCmc(benchmark::State& state) {
  auto frame = gsmtap::parse_gsmtap(cmc_datagram());
  for (auto _ : state) {
    auto msg = um::decode(frame);
    benchmark::DoNotOptimize(msg);
  }
}
BENCHMARK(BM_DecodeCmc);

static void BM_FullPipeline(benchmark::State& state) {
  auto si3 = si3_datagram();
  auto cmc = cmc_datagram();
  for (auto _ : state) {
    auto m1 = um::decode(gsmtap::parse_gsmtap(si3));
    auto m2 = um::decode(gsmtap::parse_gsmtap(cmc));
    benchmark::DoNotOptimize(m1);
    benchmark::DoNotOptimize(m2);
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_FullPipeline);
