// SPDX-License-Identifier: MIT

#include "gcw/records.hpp"

#include <cinttypes>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gcw::monitor {

namespace {

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string format_ts(double ts) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", ts);
  return buf;
}

// Minimal CSV quoting: quote when the field contains a comma, quote or
// newline; embedded quotes are doubled.
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

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  if (quoted) raise(Errc::bad_record, "unterminated quoted CSV field");
  return fields;
}

std::uint16_t parse_u16(const std::string& s, const char* what) {
  try {
    unsigned long v = std::stoul(s);
    if (v > 0xFFFF) throw std::out_of_range(what);
    return static_cast<std::uint16_t>(v);
  } catch (const std::exception&) {
    raise(Errc::bad_record, std::string("bad ") + what + " value '" + s + "'");
  }
}

}  // namespace

std::string algo_field(const std::optional<um::CipherAlgo>& algo) {
  return algo ? um::algo_name(*algo) : "none";
}

std::optional<um::CipherAlgo> algo_from_field(std::string_view field) {
  if (field == "none") return std::nullopt;
  auto algo = um::algo_from_name(field);
  if (!algo) raise(Errc::bad_record, "unknown algo '" + std::string(field) + "'");
  return algo;
}

std::string record_to_json(const CmcRecord& r) {
  std::string out = "{\"ts\":" + format_ts(r.ts_utc);
  out += ",\"algo\":" + json_string(algo_field(r.algo));
  out += ",\"mcc\":" + json_string(r.mcc);
  out += ",\"mnc\":" + json_string(r.mnc);
  out += ",\"lac\":" + std::to_string(r.lac);
  out += ",\"cid\":" + std::to_string(r.cid);
  out += ",\"arfcn\":" + std::to_string(r.arfcn);
  out += ",\"chan\":" + json_string(gsmtap::channel_name(r.channel));
  out += ",\"location\":" + json_string(r.location);
  out += ",\"provider\":" + json_string(r.provider);
  out += "}";
  return out;
}

CmcRecord record_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    CmcRecord r;
    r.ts_utc = j.at("ts").get<double>();
    r.algo = algo_from_field(j.at("algo").get<std::string>());
    r.mcc = j.at("mcc").get<std::string>();
    r.mnc = j.at("mnc").get<std::string>();
    r.lac = static_cast<std::uint16_t>(j.at("lac").get<std::uint32_t>());
    r.cid = static_cast<std::uint16_t>(j.at("cid").get<std::uint32_t>());
    r.arfcn = static_cast<std::uint16_t>(j.at("arfcn").get<std::uint32_t>());
    r.channel = gsmtap::channel_from_name(j.at("chan").get<std::string>());
    r.location = j.at("location").get<std::string>();
    r.provider = j.at("provider").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::bad_record, e.what());
  }
}

std::string record_csv_header() {
  return "ts,algo,mcc,mnc,lac,cid,arfcn,chan,location,provider";
}

std::string record_to_csv(const CmcRecord& r) {
  std::string out = format_ts(r.ts_utc);
  out += ',' + csv_field(algo_field(r.algo));
  out += ',' + csv_field(r.mcc);
  out += ',' + csv_field(r.mnc);
  out += ',' + std::to_string(r.lac);
  out += ',' + std::to_string(r.cid);
  out += ',' + std::to_string(r.arfcn);
  out += ',' + csv_field(gsmtap::channel_name(r.channel));
  out += ',' + csv_field(r.location);
  out += ',' + csv_field(r.provider);
  return out;
}

CmcRecord record_from_csv(std::string_view line) {
  auto fields = split_csv(line);
  if (fields.size() != 10) {
    raise(Errc::bad_record,
          "expected 10 CSV fields, got " + std::to_string(fields.size()));
  }
  CmcRecord r;
  try {
    r.ts_utc = std::stod(fields[0]);
  } catch (const std::exception&) {
    raise(Errc::bad_record, "bad ts value '" + fields[0] + "'");
  }
  r.algo = algo_from_field(fields[1]);
  r.mcc = fields[2];
  r.mnc = fields[3];
  r.lac = parse_u16(fields[4], "lac");
  r.cid = parse_u16(fields[5], "cid");
  r.arfcn = parse_u16(fields[6], "arfcn");
  r.channel = gsmtap::channel_from_name(fields[7]);
  r.location = fields[8];
  r.provider = fields[9];
  return r;
}

RecordSink::RecordSink(std::FILE* stream, bool owned, RecordFormat format)
    : stream_(stream), owned_(owned), format_(format) {}

RecordSink RecordSink::to_file(const std::filesystem::path& path, RecordFormat format) {
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (!f) raise(Errc::io_failure, "cannot open record log " + path.string());
  RecordSink sink(f, true, format);
  if (format == RecordFormat::csv) {
    long pos = std::ftell(f);
    if (pos == 0) sink.write_line(record_csv_header());
  }
  return sink;
}

RecordSink RecordSink::to_stream(std::FILE* stream, RecordFormat format) {
  RecordSink sink(stream, false, format);
  if (format == RecordFormat::csv) sink.write_line(record_csv_header());
  return sink;
}

RecordSink::RecordSink(RecordSink&& other) noexcept
    : stream_(other.stream_),
      owned_(other.owned_),
      format_(other.format_),
      written_(other.written_),
      last_ts_(other.last_ts_),
      have_last_ts_(other.have_last_ts_),
      enforce_monotone_(other.enforce_monotone_) {
  other.stream_ = nullptr;
  other.owned_ = false;
}

RecordSink::~RecordSink() {
  if (stream_ && owned_) std::fclose(stream_);
}

void RecordSink::write_line(const std::string& line) {
  std::string buf = line + "\n";
  if (std::fwrite(buf.data(), 1, buf.size(), stream_) != buf.size() ||
      std::fflush(stream_) != 0) {
    raise(Errc::io_failure, "record sink write failed");
  }
}

void RecordSink::append(const CmcRecord& record) {
  if (enforce_monotone_ && have_last_ts_ && record.ts_utc < last_ts_) {
    raise(Errc::bad_record, "record timestamps must be monotone non-decreasing");
  }
  write_line(format_ == RecordFormat::jsonl ? record_to_json(record) : record_to_csv(record));
  last_ts_ = record.ts_utc;
  have_last_ts_ = true;
  ++written_;
}

void RecordSink::flush() {
  if (stream_ && std::fflush(stream_) != 0) {
    raise(Errc::io_failure, "record sink flush failed");
  }
}

TransitionSink TransitionSink::to_file(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (!f) raise(Errc::io_failure, "cannot open transition log " + path.string());
  return TransitionSink(f, true);
}

TransitionSink TransitionSink::to_stream(std::FILE* stream) { return TransitionSink(stream, false); }

TransitionSink TransitionSink::disabled() { return TransitionSink(nullptr, false); }

TransitionSink::TransitionSink(TransitionSink&& other) noexcept
    : stream_(other.stream_), owned_(other.owned_) {
  other.stream_ = nullptr;
  other.owned_ = false;
}

TransitionSink::~TransitionSink() {
  if (stream_ && owned_) std::fclose(stream_);
}

void TransitionSink::append(const Transition& t) {
  if (!stream_) return;
  std::string line = "{\"ts\":" + format_ts(t.ts_utc) + ",\"from\":" + json_string(t.from) +
                     ",\"to\":" + json_string(t.to) + ",\"reason\":" + json_string(t.reason) +
                     "}\n";
  if (std::fwrite(line.data(), 1, line.size(), stream_) != line.size() ||
      std::fflush(stream_) != 0) {
    raise(Errc::io_failure, "transition sink write failed");
  }
}

void TransitionSink::flush() {
  if (stream_ && std::fflush(stream_) != 0) {
    raise(Errc::io_failure, "transition sink flush failed");
  }
}

std::vector<CmcRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_failure, "cannot open record file " + path.string());
  std::vector<CmcRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool csv = false;
  bool detected = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (!detected) {
      detected = true;
      if (line[0] != '{') {
        csv = true;
        // A leading header row is optional for CSV inputs.
        std::string stripped = line;
        if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
        if (stripped == record_csv_header()) continue;
      }
    }
    try {
      out.push_back(csv ? record_from_csv(line) : record_from_json(line));
    } catch (const Error& e) {
      raise(Errc::bad_record, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gcw::monitor
