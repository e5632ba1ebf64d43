// SPDX-License-Identifier: MIT

#include "naive_stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gcw::testsupport {

namespace {

std::string algo_key(const std::optional<um::CipherAlgo>& algo) {
  return algo ? um::algo_name(*algo) : "none";
}

bool counted(const monitor::CmcRecord& r, const NaiveOptions& options) {
  return r.algo.has_value() || options.include_nociphering;
}

int hour_of(double ts, const NaiveOptions& options) {
  auto s = static_cast<long long>(std::floor(ts)) + options.utc_offset_s;
  long long day_s = ((s % 86400) + 86400) % 86400;
  return static_cast<int>(day_s / 3600);
}

}  // namespace

NaiveShares naive_location_shares(const std::vector<monitor::CmcRecord>& records,
                                  const std::string& provider, const std::string& location,
                                  const NaiveOptions& options) {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& r : records) {
    if (r.provider != provider || r.location != location || !counted(r, options)) continue;
    ++counts[algo_key(r.algo)];
    ++total;
  }
  NaiveShares shares;
  if (total == 0) return shares;
  for (const auto& [k, n] : counts) {
    shares[k] = 100.0 * static_cast<double>(n) / static_cast<double>(total);
  }
  return shares;
}

NaiveShares naive_provider_mean(const std::vector<monitor::CmcRecord>& records,
                                const std::string& provider, const NaiveOptions& options) {
  std::set<std::string> locations;
  for (const auto& r : records) {
    if (r.provider == provider) locations.insert(r.location);
  }
  std::vector<NaiveShares> measured;
  for (const auto& loc : locations) {
    auto shares = naive_location_shares(records, provider, loc, options);
    if (!shares.empty()) measured.push_back(std::move(shares));
  }
  NaiveShares mean;
  if (measured.empty()) return mean;
  std::set<std::string> algos;
  for (const auto& m : measured) {
    for (const auto& [k, v] : m) algos.insert(k);
  }
  for (const auto& a : algos) {
    double sum = 0;
    for (const auto& m : measured) {
      auto it = m.find(a);
      sum += it == m.end() ? 0.0 : it->second;
    }
    mean[a] = sum / static_cast<double>(measured.size());
  }
  return mean;
}

std::vector<NaiveShares> naive_hourly_profile(const std::vector<monitor::CmcRecord>& records,
                                              const std::string& provider,
                                              const NaiveOptions& options) {
  std::set<std::string> locations;
  for (const auto& r : records) {
    if (r.provider == provider && counted(r, options)) locations.insert(r.location);
  }
  std::vector<std::map<std::string, double>> buckets(12);
  std::size_t n_locations = 0;
  for (const auto& loc : locations) {
    std::uint64_t total = 0;
    std::map<std::pair<int, std::string>, std::uint64_t> cell;
    for (const auto& r : records) {
      if (r.provider != provider || r.location != loc || !counted(r, options)) continue;
      ++cell[{hour_of(r.ts_utc, options), algo_key(r.algo)}];
      ++total;
    }
    if (total == 0) continue;
    ++n_locations;
    for (const auto& [key, n] : cell) {
      buckets[static_cast<std::size_t>(key.first / 2)][key.second] +=
          static_cast<double>(n) / static_cast<double>(total);
    }
  }
  for (auto& b : buckets) {
    for (auto& [k, v] : b) v /= static_cast<double>(n_locations);
  }
  return buckets;
}

std::map<std::pair<std::string, std::string>, NaiveSummaryCell> naive_summary(
    const std::vector<monitor::CmcRecord>& records) {
  std::map<std::pair<std::string, std::string>, NaiveSummaryCell> out;
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> spans;
  for (const auto& r : records) {
    auto key = std::make_pair(r.location, r.provider);
    auto [it, fresh] = spans.emplace(key, std::make_pair(r.ts_utc, r.ts_utc));
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.ts_utc);
      it->second.second = std::max(it->second.second, r.ts_utc);
    }
    ++out[key].count;
  }
  for (auto& [key, cell] : out) {
    const auto& span = spans[key];
    cell.days = std::round((span.second - span.first) / 86400.0 * 100.0) / 100.0;
  }
  return out;
}

}  // namespace gcw::testsupport
