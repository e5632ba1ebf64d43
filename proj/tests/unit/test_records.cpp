// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <algorithm>
#include <random>

#include "gcw/records.hpp"
#include "proc.hpp"

using namespace gcw;
using namespace gcw::monitor;
using gcw::testsupport::TempDir;
using gcw::testsupport::read_file;
using gcw::testsupport::write_file;

namespace {

CmcRecord sample_record() {
  CmcRecord r;
  r.ts_utc = 1735000123.456789;
  r.algo = um::CipherAlgo::A5_3;
  r.mcc = "262";
  r.mnc = "01";
  r.lac = 10075;
  r.cid = 10000;
  r.arfcn = 20;
  r.channel = gsmtap::ChannelType::Sdcch8;
  r.location = "3/u";
  r.provider = "A";
  return r;
}

CmcRecord random_record(std::mt19937_64& rng) {
  CmcRecord r;
  // Timestamps are serialized at microsecond precision; quantize accordingly.
  double raw = 1.7e9 + static_cast<double>(rng() % 1000000) / 7.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", raw);
  r.ts_utc = std::stod(buf);
  if (rng() % 4 == 0) {
    r.algo.reset();
  } else {
    r.algo = static_cast<um::CipherAlgo>(1 + rng() % 7);
  }
  r.mcc = "262";
  r.mnc = rng() % 2 ? "01" : "023";
  r.lac = static_cast<std::uint16_t>(rng());
  r.cid = static_cast<std::uint16_t>(rng());
  r.arfcn = static_cast<std::uint16_t>(rng() % 1024);
  r.channel = rng() % 2 ? gsmtap::ChannelType::Sdcch8 : gsmtap::ChannelType::Sacch8;
  r.location = "loc,with \"quotes\"" + std::to_string(rng() % 10);
  r.provider = "P" + std::to_string(rng() % 3);
  return r;
}

}  // namespace

TEST_CASE("JSON line uses exactly the contract keys") {
  auto line = record_to_json(sample_record());
  CHECK(line ==
        "{\"ts\":1735000123.456789,\"algo\":\"A5/3\",\"mcc\":\"262\",\"mnc\":\"01\","
        "\"lac\":10075,\"cid\":10000,\"arfcn\":20,\"chan\":\"SDCCH8\","
        "\"location\":\"3/u\",\"provider\":\"A\"}");
  CHECK(record_from_json(line) == sample_record());
}

TEST_CASE("a no-ciphering decision serializes as algo none") {
  auto r = sample_record();
  r.algo.reset();
  auto line = record_to_json(r);
  CHECK(line.find("\"algo\":\"none\"") != std::string::npos);
  CHECK_FALSE(record_from_json(line).algo.has_value());
}

TEST_CASE("JSON and CSV codecs roundtrip arbitrary records") {
  std::mt19937_64 rng(0x2EC);
  for (int i = 0; i < 300; ++i) {
    auto r = random_record(rng);
    CHECK(record_from_json(record_to_json(r)) == r);
    CHECK(record_from_csv(record_to_csv(r)) == r);
  }
}

TEST_CASE("malformed lines raise BadRecord") {
  CHECK_THROWS_AS(record_from_json("{\"ts\": \"not-a-number\"}"), Error);
  CHECK_THROWS_AS(record_from_json("not json at all"), Error);
  CHECK_THROWS_AS(record_from_json("{\"ts\":1.0}"), Error);  // missing keys
  CHECK_THROWS_AS(record_from_csv("1,2,3"), Error);
  CHECK_THROWS_AS(record_from_csv("x,A5/1,262,01,1,1,1,SDCCH8,loc,prov"), Error);
  CHECK_THROWS_AS(record_from_csv("1.0,A5/9,262,01,1,1,1,SDCCH8,loc,prov"), Error);
  CHECK_THROWS_AS(record_from_csv("1.0,A5/1,262,01,999999,1,1,SDCCH8,loc,prov"), Error);
}

TEST_CASE("record sink appends atomically formatted lines") {
  TempDir tmp;
  auto path = tmp.file("records.jsonl");
  {
    auto sink = RecordSink::to_file(path, RecordFormat::jsonl);
    auto r = sample_record();
    sink.append(r);
    r.ts_utc += 1;
    sink.append(r);
    CHECK(sink.written() == 2);
  }
  auto content = read_file(path);
  CHECK(std::count(content.begin(), content.end(), '\n') == 2);
  auto loaded = load_records(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == sample_record());
}

TEST_CASE("record sink rejects decreasing timestamps") {
  TempDir tmp;
  auto sink = RecordSink::to_file(tmp.file("mono.jsonl"), RecordFormat::jsonl);
  auto r = sample_record();
  sink.append(r);
  r.ts_utc -= 10;
  CHECK_THROWS_AS(sink.append(r), Error);
  r.ts_utc += 10;
  CHECK_NOTHROW(sink.append(r));  // equal timestamps are fine
}

TEST_CASE("CSV sink writes a header once") {
  TempDir tmp;
  auto path = tmp.file("records.csv");
  {
    auto sink = RecordSink::to_file(path, RecordFormat::csv);
    sink.append(sample_record());
  }
  {
    auto sink = RecordSink::to_file(path, RecordFormat::csv);  // append run
    auto r = sample_record();
    r.ts_utc += 5;
    sink.append(r);
  }
  auto content = read_file(path);
  CHECK(content.rfind("ts,algo,", 0) == 0);
  CHECK(content.find("ts,algo,", 10) == std::string::npos);
  auto loaded = load_records(path);
  CHECK(loaded.size() == 2);
}

TEST_CASE("load_records reports the offending line") {
  TempDir tmp;
  auto path = tmp.file("broken.jsonl");
  write_file(path, record_to_json(sample_record()) + "\n{\"ts\": oops}\n");
  try {
    load_records(path);
    FAIL("expected BadRecord");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_record);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_records(tmp.file("absent.jsonl")), Error);
}

TEST_CASE("transition log lines carry ts/from/to/reason") {
  TempDir tmp;
  auto path = tmp.file("session.jsonl");
  {
    auto sink = TransitionSink::to_file(path);
    sink.append({1000.0, "scanning", "probing", "stream source"});
    sink.append({1001.5, "probing", "locked", "si3 match"});
  }
  auto content = read_file(path);
  CHECK(content.find("\"from\":\"scanning\"") != std::string::npos);
  CHECK(content.find("\"to\":\"locked\"") != std::string::npos);
  CHECK(content.find("\"reason\":\"si3 match\"") != std::string::npos);
}
