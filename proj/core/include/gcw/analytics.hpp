// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gcw/records.hpp"

namespace gcw::analytics {

using monitor::CmcRecord;

// Algorithm axis used by every statistic: index 0 is "none" (a cipher mode
// command without ciphering), 1..7 are A5/1..A5/7.
inline constexpr std::size_t kAlgoAxis = 8;

std::size_t algo_index(const std::optional<um::CipherAlgo>& algo) noexcept;
std::string algo_axis_name(std::size_t index);

// Civil-time handling for hour-of-day bucketing. Supports "UTC" (default),
// fixed offsets ("+02:00", "-0530", "UTC+1") and IANA zone names resolved
// through the system tz database (DST applies as the database says).
class Timezone {
 public:
  static Timezone utc();
  static Timezone parse(const std::string& spec);  // throws BadConfig

  int hour_of_day(double ts_utc) const;  // 0..23
  const std::string& name() const noexcept { return name_; }

 private:
  enum class Kind { utc, fixed, iana };
  Kind kind_ = Kind::utc;
  int offset_s_ = 0;
  std::string name_ = "UTC";
};

struct AnalyticsOptions {
  // "none" records never affect A5/x shares unless explicitly included, in
  // which case they form their own axis column.
  bool include_nociphering = false;
  Timezone timezone = Timezone::utc();
};

// Records grouped by (provider, location); the input to all campaign
// statistics. Every record must carry non-empty provider and location labels.
class CampaignDataset {
 public:
  CampaignDataset() = default;
  static CampaignDataset from_records(std::vector<CmcRecord> records);  // throws BadRecord

  const std::vector<CmcRecord>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  std::vector<std::string> providers() const;      // sorted unique
  std::vector<std::string> all_locations() const;  // sorted unique across providers
  // Locations with at least one record for the provider, sorted.
  std::vector<std::string> locations(const std::string& provider) const;
  // Indices into records() for one (provider, location) cell.
  const std::vector<std::size_t>& cell(const std::string& provider,
                                       const std::string& location) const;

 private:
  std::vector<CmcRecord> records_;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> cells_;
};

struct LocationDistribution {
  std::string provider;
  std::string location;
  std::array<std::uint64_t, kAlgoAxis> counts{};
  std::array<double, kAlgoAxis> share_pct{};
  std::uint64_t total = 0;  // records contributing to the shares
};

// Share(algo) = count(algo) / total * 100 for one (provider, location) cell.
// Throws EmptyCell when the cell has no contributing records, mirroring
// unmeasured provider/location pairs.
LocationDistribution location_distribution(const CampaignDataset& ds, const std::string& provider,
                                           const std::string& location,
                                           const AnalyticsOptions& options = {});

struct ProviderSummary {
  std::string provider;
  std::array<double, kAlgoAxis> mean_share_pct{};
  std::size_t n_locations = 0;  // measured locations only; weight is 1/n
  std::vector<std::string> locations;
};

// Location-weighted provider mean: each measured location contributes its
// share vector with weight 1/n_locations. Throws NoData.
ProviderSummary provider_mean(const CampaignDataset& ds, const std::string& provider,
                              const AnalyticsOptions& options = {});

inline constexpr std::size_t kHourlyBuckets = 12;  // two-hour pairs

struct HourlyProfile {
  std::string provider;
  // share[bucket][algo]; all entries sum to 1.
  std::array<std::array<double, kAlgoAxis>, kHourlyBuckets> share{};
  std::size_t n_locations = 0;
};

// Per location, each record contributes 1/total_of_location to its (hour,
// algo) cell; the profile is the equal-weight mean across locations, then
// hours are folded into two-hour buckets. Throws NoData.
HourlyProfile hourly_profile(const CampaignDataset& ds, const std::string& provider,
                             const AnalyticsOptions& options = {});

struct SummaryRow {
  std::string location;
  std::string provider;
  double days = 0;  // (max ts - min ts) / 86400, rounded to 2 decimals
  std::uint64_t cmc_count = 0;
};

// One row per (location, provider) grid cell, unmeasured cells as 0 / 0.
std::vector<SummaryRow> campaign_summary(const CampaignDataset& ds);

std::string summary_table_text(const std::vector<SummaryRow>& rows);
std::string provider_means_text(const std::vector<ProviderSummary>& summaries,
                                const std::vector<std::size_t>& algo_columns);

// The algorithm axis columns worth reporting for a dataset: A5/1, A5/3 and
// A5/4 always, plus anything else observed under the given options.
std::vector<std::size_t> report_columns(const CampaignDataset& ds,
                                        const AnalyticsOptions& options = {});

// Writes figure-ready data: stripplot points + provider means, the heatmap
// matrix and the hourly profiles, each as CSV and JSON, plus the campaign
// summary. Deterministic ordering and byte-identical reruns.
void export_figures(const CampaignDataset& ds, const std::filesystem::path& out_dir,
                    const AnalyticsOptions& options = {});

}  // namespace gcw::analytics
