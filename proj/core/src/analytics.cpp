// SPDX-License-Identifier: MIT

#include "gcw/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace gcw::analytics {

std::size_t algo_index(const std::optional<um::CipherAlgo>& algo) noexcept {
  return algo ? static_cast<std::size_t>(*algo) : 0;
}

std::string algo_axis_name(std::size_t index) {
  if (index == 0) return "none";
  return "A5/" + std::to_string(index);
}

Timezone Timezone::utc() { return Timezone{}; }

Timezone Timezone::parse(const std::string& spec) {
  Timezone tz;
  if (spec.empty() || spec == "UTC" || spec == "utc" || spec == "Z") {
    return tz;
  }
  std::string body = spec;
  if (body.rfind("UTC", 0) == 0 && body.size() > 3 && (body[3] == '+' || body[3] == '-')) {
    body = body.substr(3);
  }
  if (body[0] == '+' || body[0] == '-') {
    int sign = body[0] == '-' ? -1 : 1;
    std::string digits = body.substr(1);
    std::string h, m = "0";
    auto colon = digits.find(':');
    if (colon != std::string::npos) {
      h = digits.substr(0, colon);
      m = digits.substr(colon + 1);
    } else if (digits.size() <= 2) {
      h = digits;
    } else if (digits.size() == 4) {
      h = digits.substr(0, 2);
      m = digits.substr(2);
    } else {
      raise(Errc::bad_config, "bad timezone offset '" + spec + "'");
    }
    try {
      int hours = std::stoi(h);
      int minutes = std::stoi(m);
      if (hours > 14 || minutes > 59) throw std::out_of_range(spec);
      tz.kind_ = Kind::fixed;
      tz.offset_s_ = sign * (hours * 3600 + minutes * 60);
      tz.name_ = spec;
      return tz;
    } catch (const std::exception&) {
      raise(Errc::bad_config, "bad timezone offset '" + spec + "'");
    }
  }
  // IANA name: resolved through the system tz database via localtime_r.
  if (!std::filesystem::exists(std::filesystem::path("/usr/share/zoneinfo") / spec)) {
    raise(Errc::bad_config, "unknown timezone '" + spec + "'");
  }
  ::setenv("TZ", spec.c_str(), 1);
  ::tzset();
  tz.kind_ = Kind::iana;
  tz.name_ = spec;
  return tz;
}

int Timezone::hour_of_day(double ts_utc) const {
  auto floor_secs = static_cast<std::int64_t>(std::floor(ts_utc));
  if (kind_ == Kind::iana) {
    std::time_t t = static_cast<std::time_t>(floor_secs);
    std::tm tm{};
    ::localtime_r(&t, &tm);
    return tm.tm_hour;
  }
  std::int64_t local = floor_secs + offset_s_;
  std::int64_t seconds_of_day = ((local % 86400) + 86400) % 86400;
  return static_cast<int>(seconds_of_day / 3600);
}

CampaignDataset CampaignDataset::from_records(std::vector<CmcRecord> records) {
  CampaignDataset ds;
  ds.records_ = std::move(records);
  for (std::size_t i = 0; i < ds.records_.size(); ++i) {
    const auto& r = ds.records_[i];
    if (r.provider.empty() || r.location.empty()) {
      raise(Errc::bad_record,
            "record " + std::to_string(i) + " is missing a provider or location label");
    }
    ds.cells_[{r.provider, r.location}].push_back(i);
  }
  return ds;
}

std::vector<std::string> CampaignDataset::providers() const {
  std::set<std::string> unique;
  for (const auto& [key, idx] : cells_) unique.insert(key.first);
  return {unique.begin(), unique.end()};
}

std::vector<std::string> CampaignDataset::all_locations() const {
  std::set<std::string> unique;
  for (const auto& [key, idx] : cells_) unique.insert(key.second);
  return {unique.begin(), unique.end()};
}

std::vector<std::string> CampaignDataset::locations(const std::string& provider) const {
  std::vector<std::string> out;
  for (const auto& [key, idx] : cells_) {
    if (key.first == provider) out.push_back(key.second);
  }
  return out;
}

const std::vector<std::size_t>& CampaignDataset::cell(const std::string& provider,
                                                      const std::string& location) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = cells_.find({provider, location});
  return it == cells_.end() ? kEmpty : it->second;
}

LocationDistribution location_distribution(const CampaignDataset& ds, const std::string& provider,
                                           const std::string& location,
                                           const AnalyticsOptions& options) {
  LocationDistribution dist;
  dist.provider = provider;
  dist.location = location;
  for (std::size_t i : ds.cell(provider, location)) {
    const auto& r = ds.records()[i];
    if (!r.algo && !options.include_nociphering) continue;
    ++dist.counts[algo_index(r.algo)];
    ++dist.total;
  }
  if (dist.total == 0) {
    raise(Errc::empty_cell, "no measurements for provider " + provider + " at " + location);
  }
  for (std::size_t a = 0; a < kAlgoAxis; ++a) {
    dist.share_pct[a] =
        static_cast<double>(dist.counts[a]) / static_cast<double>(dist.total) * 100.0;
  }
  return dist;
}

ProviderSummary provider_mean(const CampaignDataset& ds, const std::string& provider,
                              const AnalyticsOptions& options) {
  ProviderSummary summary;
  summary.provider = provider;
  for (const auto& location : ds.locations(provider)) {
    try {
      auto dist = location_distribution(ds, provider, location, options);
      summary.locations.push_back(location);
      for (std::size_t a = 0; a < kAlgoAxis; ++a) {
        summary.mean_share_pct[a] += dist.share_pct[a];
      }
    } catch (const Error& e) {
      if (e.code() != Errc::empty_cell) throw;
      // Unmeasured locations do not count toward n.
    }
  }
  summary.n_locations = summary.locations.size();
  if (summary.n_locations == 0) {
    raise(Errc::no_data, "provider " + provider + " has no measured locations");
  }
  for (std::size_t a = 0; a < kAlgoAxis; ++a) {
    summary.mean_share_pct[a] /= static_cast<double>(summary.n_locations);
  }
  return summary;
}

HourlyProfile hourly_profile(const CampaignDataset& ds, const std::string& provider,
                             const AnalyticsOptions& options) {
  HourlyProfile profile;
  profile.provider = provider;
  std::array<std::array<double, kAlgoAxis>, 24> hourly{};

  std::size_t n_locations = 0;
  for (const auto& location : ds.locations(provider)) {
    std::array<std::array<std::uint64_t, kAlgoAxis>, 24> counts{};
    std::uint64_t total = 0;
    for (std::size_t i : ds.cell(provider, location)) {
      const auto& r = ds.records()[i];
      if (!r.algo && !options.include_nociphering) continue;
      int hour = options.timezone.hour_of_day(r.ts_utc);
      ++counts[static_cast<std::size_t>(hour)][algo_index(r.algo)];
      ++total;
    }
    if (total == 0) continue;  // unmeasured location
    ++n_locations;
    // Hours without traffic contribute zero shares, preserving total mass.
    for (std::size_t h = 0; h < 24; ++h) {
      for (std::size_t a = 0; a < kAlgoAxis; ++a) {
        hourly[h][a] += static_cast<double>(counts[h][a]) / static_cast<double>(total);
      }
    }
  }
  if (n_locations == 0) {
    raise(Errc::no_data, "provider " + provider + " has no measured locations");
  }
  profile.n_locations = n_locations;
  for (std::size_t h = 0; h < 24; ++h) {
    for (std::size_t a = 0; a < kAlgoAxis; ++a) {
      profile.share[h / 2][a] += hourly[h][a] / static_cast<double>(n_locations);
    }
  }
  return profile;
}

std::vector<SummaryRow> campaign_summary(const CampaignDataset& ds) {
  std::vector<SummaryRow> rows;
  auto locations = ds.all_locations();
  auto providers = ds.providers();
  for (const auto& location : locations) {
    for (const auto& provider : providers) {
      SummaryRow row;
      row.location = location;
      row.provider = provider;
      const auto& cell = ds.cell(provider, location);
      row.cmc_count = cell.size();
      if (!cell.empty()) {
        double lo = ds.records()[cell.front()].ts_utc;
        double hi = lo;
        for (std::size_t i : cell) {
          lo = std::min(lo, ds.records()[i].ts_utc);
          hi = std::max(hi, ds.records()[i].ts_utc);
        }
        row.days = std::round((hi - lo) / 86400.0 * 100.0) / 100.0;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::size_t> report_columns(const CampaignDataset& ds,
                                        const AnalyticsOptions& options) {
  std::set<std::size_t> cols = {1, 3, 4};  // A5/1, A5/3, A5/4 always reported
  for (const auto& r : ds.records()) {
    if (!r.algo && !options.include_nociphering) continue;
    cols.insert(algo_index(r.algo));
  }
  std::vector<std::size_t> out(cols.begin(), cols.end());
  // "none" (index 0) sorts first numerically; report it last.
  if (!out.empty() && out.front() == 0) {
    out.erase(out.begin());
    out.push_back(0);
  }
  return out;
}

namespace {

std::string fmt_share(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string fmt_days(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content)) {
    raise(Errc::io_failure, "cannot write " + path.string());
  }
}

}  // namespace

std::string summary_table_text(const std::vector<SummaryRow>& rows) {
  std::size_t wloc = 8, wprov = 8;
  for (const auto& r : rows) {
    wloc = std::max(wloc, r.location.size());
    wprov = std::max(wprov, r.provider.size());
  }
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %10s  %10s\n", static_cast<int>(wloc), "location",
                static_cast<int>(wprov), "provider", "days", "cmc_count");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s  %-*s  %10.2f  %10llu\n", static_cast<int>(wloc),
                  r.location.c_str(), static_cast<int>(wprov), r.provider.c_str(), r.days,
                  static_cast<unsigned long long>(r.cmc_count));
    out += buf;
  }
  return out;
}

std::string provider_means_text(const std::vector<ProviderSummary>& summaries,
                                const std::vector<std::size_t>& algo_columns) {
  std::size_t wprov = 8;
  for (const auto& s : summaries) wprov = std::max(wprov, s.provider.size());
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-*s  %11s", static_cast<int>(wprov), "provider", "n_locations");
  out += buf;
  for (auto a : algo_columns) {
    std::snprintf(buf, sizeof(buf), "  %9s", algo_axis_name(a).c_str());
    out += buf;
  }
  out += '\n';
  for (const auto& s : summaries) {
    std::snprintf(buf, sizeof(buf), "%-*s  %11zu", static_cast<int>(wprov), s.provider.c_str(),
                  s.n_locations);
    out += buf;
    for (auto a : algo_columns) {
      std::snprintf(buf, sizeof(buf), "  %8.1f%%", s.mean_share_pct[a]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void export_figures(const CampaignDataset& ds, const std::filesystem::path& out_dir,
                    const AnalyticsOptions& options) {
  std::filesystem::create_directories(out_dir);
  auto providers = ds.providers();
  auto columns = report_columns(ds, options);

  using nlohmann::json;
  json algo_names = json::array();
  for (auto a : columns) algo_names.push_back(algo_axis_name(a));

  // Stripplot: one point per measured (provider, location, algo), plus the
  // provider means the red lines mark.
  std::string strip_csv = "kind,provider,location,algo,share_pct\n";
  json strip_json;
  strip_json["algos"] = algo_names;
  strip_json["providers"] = json::array();
  for (const auto& provider : providers) {
    ProviderSummary summary;
    try {
      summary = provider_mean(ds, provider, options);
    } catch (const Error& e) {
      if (e.code() != Errc::no_data) throw;
      continue;
    }
    json jprov;
    jprov["provider"] = provider;
    jprov["n_locations"] = summary.n_locations;
    jprov["points"] = json::array();
    for (const auto& location : summary.locations) {
      auto dist = location_distribution(ds, provider, location, options);
      json shares;
      for (auto a : columns) {
        strip_csv += "point," + csv_field(provider) + "," + csv_field(location) + "," + algo_axis_name(a) + "," +
                     fmt_share(dist.share_pct[a]) + "\n";
        shares[algo_axis_name(a)] = dist.share_pct[a];
      }
      jprov["points"].push_back(json{{"location", location}, {"share_pct", shares}});
    }
    json means;
    for (auto a : columns) {
      strip_csv += "mean," + csv_field(provider) + ",," + algo_axis_name(a) + "," +
                   fmt_share(summary.mean_share_pct[a]) + "\n";
      means[algo_axis_name(a)] = summary.mean_share_pct[a];
    }
    jprov["mean_share_pct"] = means;
    strip_json["providers"].push_back(jprov);
  }
  write_file(out_dir / "stripplot.csv", strip_csv);
  write_file(out_dir / "stripplot.json", strip_json.dump(2) + "\n");

  // Heatmap: provider x location matrix of shares; unmeasured cells are
  // listed separately so renderers can leave them blank.
  std::string heat_csv = "provider,location,algo,share_pct\n";
  json heat_json;
  heat_json["algos"] = algo_names;
  heat_json["cells"] = json::array();
  heat_json["empty_cells"] = json::array();
  for (const auto& provider : providers) {
    for (const auto& location : ds.all_locations()) {
      try {
        auto dist = location_distribution(ds, provider, location, options);
        json shares;
        for (auto a : columns) {
          heat_csv += csv_field(provider) + "," + csv_field(location) + "," + algo_axis_name(a) + "," +
                      fmt_share(dist.share_pct[a]) + "\n";
          shares[algo_axis_name(a)] = dist.share_pct[a];
        }
        heat_json["cells"].push_back(
            json{{"provider", provider}, {"location", location}, {"share_pct", shares}});
      } catch (const Error& e) {
        if (e.code() != Errc::empty_cell) throw;
        heat_json["empty_cells"].push_back(json{{"provider", provider}, {"location", location}});
      }
    }
  }
  write_file(out_dir / "heatmap.csv", heat_csv);
  write_file(out_dir / "heatmap.json", heat_json.dump(2) + "\n");

  // Hourly profiles: normalized two-hour buckets per provider.
  std::string hourly_csv = "provider,bucket_start_hour,algo,share\n";
  json hourly_json;
  hourly_json["algos"] = algo_names;
  hourly_json["timezone"] = options.timezone.name();
  hourly_json["providers"] = json::array();
  for (const auto& provider : providers) {
    HourlyProfile profile;
    try {
      profile = hourly_profile(ds, provider, options);
    } catch (const Error& e) {
      if (e.code() != Errc::no_data) throw;
      continue;
    }
    json jprov;
    jprov["provider"] = provider;
    jprov["n_locations"] = profile.n_locations;
    jprov["buckets"] = json::array();
    for (std::size_t b = 0; b < kHourlyBuckets; ++b) {
      json shares;
      for (auto a : columns) {
        hourly_csv += csv_field(provider) + "," + std::to_string(2 * b) + "," + algo_axis_name(a) + "," +
                      fmt_share(profile.share[b][a]) + "\n";
        shares[algo_axis_name(a)] = profile.share[b][a];
      }
      jprov["buckets"].push_back(json{{"start_hour", 2 * b}, {"share", shares}});
    }
    hourly_json["providers"].push_back(jprov);
  }
  write_file(out_dir / "hourly.csv", hourly_csv);
  write_file(out_dir / "hourly.json", hourly_json.dump(2) + "\n");

  // Campaign summary (duration and raw record counts, empty cells as 0/0).
  auto rows = campaign_summary(ds);
  std::string summary_csv = "location,provider,days,cmc_count\n";
  for (const auto& r : rows) {
    summary_csv += csv_field(r.location) + "," + csv_field(r.provider) + "," + fmt_days(r.days) +
                   "," + std::to_string(r.cmc_count) + "\n";
  }
  write_file(out_dir / "summary.csv", summary_csv);
  write_file(out_dir / "summary.txt", summary_table_text(rows));
}

}  // namespace gcw::analytics
