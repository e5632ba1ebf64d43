// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcw/gsmtap.hpp"
#include "gcw/um.hpp"

namespace gcw::monitor {

// One logged data point: a Cipher Mode Command observation stamped with the
// locked cell identity. algo empty means a "no ciphering" command.
struct CmcRecord {
  double ts_utc = 0;
  std::optional<um::CipherAlgo> algo;
  std::string mcc;
  std::string mnc;
  std::uint16_t lac = 0;
  std::uint16_t cid = 0;
  std::uint16_t arfcn = 0;
  gsmtap::ChannelType channel = gsmtap::ChannelType::Unknown;
  std::string location;
  std::string provider;

  bool operator==(const CmcRecord&) const = default;
};

std::string algo_field(const std::optional<um::CipherAlgo>& algo);  // "A5/<n>" or "none"
std::optional<um::CipherAlgo> algo_from_field(std::string_view field);  // throws BadRecord

// JSON Lines codec. Keys exactly: ts, algo, mcc, mnc, lac, cid, arfcn, chan,
// location, provider.
std::string record_to_json(const CmcRecord& record);
CmcRecord record_from_json(std::string_view line);  // throws BadRecord

// CSV codec with the same columns, in the same order.
std::string record_csv_header();
std::string record_to_csv(const CmcRecord& record);
CmcRecord record_from_csv(std::string_view line);  // throws BadRecord

enum class RecordFormat { jsonl, csv };

// Single-writer append sink; each record is one line, fully written or
// absent. Timestamps must be monotone non-decreasing within one session log.
class RecordSink {
 public:
  static RecordSink to_file(const std::filesystem::path& path, RecordFormat format);
  static RecordSink to_stream(std::FILE* stream, RecordFormat format);  // not closed
  ~RecordSink();

  RecordSink(RecordSink&& other) noexcept;
  RecordSink& operator=(RecordSink&&) = delete;
  RecordSink(const RecordSink&) = delete;
  RecordSink& operator=(const RecordSink&) = delete;

  void append(const CmcRecord& record);  // throws IoFailure
  void flush();
  std::uint64_t written() const noexcept { return written_; }

  // Session logs require monotone timestamps; batch re-emission of capture
  // data may disable the check.
  void set_enforce_monotone(bool enforce) noexcept { enforce_monotone_ = enforce; }

 private:
  RecordSink(std::FILE* stream, bool owned, RecordFormat format);
  void write_line(const std::string& line);

  std::FILE* stream_ = nullptr;
  bool owned_ = false;
  RecordFormat format_ = RecordFormat::jsonl;
  std::uint64_t written_ = 0;
  double last_ts_ = 0;
  bool have_last_ts_ = false;
  bool enforce_monotone_ = true;
};

// Session lifecycle transitions, one JSON line each: ts, from, to, reason.
struct Transition {
  double ts_utc = 0;
  std::string from;
  std::string to;
  std::string reason;
};

class TransitionSink {
 public:
  static TransitionSink to_file(const std::filesystem::path& path);
  static TransitionSink to_stream(std::FILE* stream);
  static TransitionSink disabled();
  ~TransitionSink();

  TransitionSink(TransitionSink&& other) noexcept;
  TransitionSink& operator=(TransitionSink&&) = delete;
  TransitionSink(const TransitionSink&) = delete;
  TransitionSink& operator=(const TransitionSink&) = delete;

  void append(const Transition& transition);
  void flush();

 private:
  TransitionSink(std::FILE* stream, bool owned) : stream_(stream), owned_(owned) {}

  std::FILE* stream_ = nullptr;
  bool owned_ = false;
};

// Loads a record file, auto-detecting JSONL vs CSV from the first line.
// Malformed lines raise BadRecord with "<path>:<line>: ..." context.
std::vector<CmcRecord> load_records(const std::filesystem::path& path);

}  // namespace gcw::monitor
