// SPDX-License-Identifier: MIT

#include <benchmark/benchmark.h>

#include <random>

#include "gcw/analytics.hpp"

using namespace gcw;

namespace {

analytics::CampaignDataset synth_dataset(std::size_t n_records) {
  std::mt19937_64 rng(42);
  std::vector<monitor::CmcRecord> records;
  records.reserve(n_records);
  const char* locations[] = {"1/u", "2/u", "3/s", "4/s", "5/r"};
  for (std::size_t i = 0; i < n_records; ++i) {
    monitor::CmcRecord r;
    r.ts_utc = 1.7e9 + static_cast<double>(rng() % (86400 * 7));
    r.algo = static_cast<um::CipherAlgo>(1 + rng() % 4);
    r.mcc = "262";
    r.mnc = "01";
    r.lac = 1;
    r.cid = 2;
    r.arfcn = 20;
    r.channel = gsmtap::ChannelType::Sdcch8;
    r.location = locations[rng() % 5];
    r.provider = rng() % 2 ? "A" : "B";
    records.push_back(std::move(r));
  }
  return analytics::CampaignDataset::from_records(std::move(records));
}

}  // namespace

static void BM_ProviderMean(benchmark::State& state) {
  auto ds = synth_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto summary = analytics::provider_mean(ds, "A");
    benchmark::DoNotOptimize(summary);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProviderMean)->Arg(10000)->Arg(100000);

static void BM_HourlyProfile(benchmark::State& state) {
  auto ds = synth_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto profile = analytics::hourly_profile(ds, "A");
    benchmark::DoNotOptimize(profile);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HourlyProfile)->Arg(10000)->Arg(100000);

static void BM_RecordJsonCodec(benchmark::State& state) {
  monitor::CmcRecord r;
  r.ts_utc = 1.7e9;
  r.algo = um::CipherAlgo::A5_3;
  r.mcc = "262";
  r.mnc = "01";
  r.lac = 10075;
  r.cid = 10000;
  r.arfcn = 20;
  r.channel = gsmtap::ChannelType::Sdcch8;
  r.location = "3/u";
  r.provider = "A";
  for (auto _ : state) {
    auto parsed = monitor::record_from_json(monitor::record_to_json(r));
    benchmark::DoNotOptimize(parsed);
  }
}
BENCHMARK(BM_RecordJsonCodec);
