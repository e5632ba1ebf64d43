// SPDX-License-Identifier: MIT
//
// gcw - passive GSM cipher-usage monitoring toolkit.
// Subcommands: monitor (live/offline sensor lifecycle), parse (offline pcap
// to records), analyze (campaign statistics and figure data), a5 (A5/1
// laboratory), arfcn (channel arithmetic).

#include <csignal>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcw/a5.hpp"
#include "gcw/analytics.hpp"
#include "gcw/arfcn.hpp"
#include "gcw/capture.hpp"
#include "gcw/monitor.hpp"
#include "gcw/pcap.hpp"
#include "gcw/records.hpp"
#include "settings.hpp"

using namespace gcw;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true, std::memory_order_relaxed); }

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::bad_config:
    case Errc::invalid_arfcn:
    case Errc::frame_number_out_of_range:
    case Errc::length_mismatch:
    case Errc::empty_cell:
    case Errc::no_data:
      return 2;
    case Errc::source_unavailable:
    case Errc::corrupt_capture_header:
    case Errc::unsupported_link_type:
    case Errc::io_failure:
    case Errc::no_provider_found:
      return 3;
    case Errc::bad_record:
      return 4;
    default:
      return 1;
  }
}

std::uint64_t parse_hex(const std::string& text, std::size_t max_digits, const char* what) {
  std::string body = text;
  if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) body = body.substr(2);
  if (body.empty() || body.size() > max_digits) {
    raise(Errc::bad_config, std::string(what) + " must be 1-" + std::to_string(max_digits) +
                                " hex digits, got '" + text + "'");
  }
  std::uint64_t value = 0;
  for (char c : body) {
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else raise(Errc::bad_config, std::string(what) + ": '" + text + "' is not valid hex");
    value = (value << 4) | static_cast<std::uint64_t>(nibble);
  }
  return value;
}

std::vector<std::uint8_t> parse_hex_bytes(const std::string& text, const char* what) {
  std::string body = text;
  if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) body = body.substr(2);
  if (body.size() % 2 != 0) {
    raise(Errc::bad_config, std::string(what) + " must have an even number of hex digits");
  }
  std::vector<std::uint8_t> out(body.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(parse_hex(body.substr(2 * i, 2), 2, what));
  }
  return out;
}

std::string hex_string(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

a5::FrameCount resolve_count(bool has_fn, std::uint32_t fn, const std::string& count_hex) {
  if (!count_hex.empty()) {
    auto value = parse_hex(count_hex, 6, "count");
    if (value >= (1u << 22)) {
      raise(Errc::bad_config, "count 0x" + count_hex + " does not fit in 22 bits");
    }
    return a5::FrameCount{static_cast<std::uint32_t>(value)};
  }
  if (has_fn) return a5::count_from_fn(fn);
  return a5::FrameCount{0};
}

// ---------------------------------------------------------------- monitor --

struct MonitorArgs {
  std::string config;
  std::string mcc, mnc;
  std::string source;
  std::string log, transitions;
  std::string location, provider;
  std::string format = "jsonl";
  int probe_duration = 10;
  int watchdog_period = 300;
  int watchdog_window = 30;
  std::uint64_t watchdog_threshold = 5;
  std::uint16_t gsmtap_port = gsmtap::kDefaultUdpPort;
  bool exit_on_restart = false;
  std::string scan_cmd, tune_cmd;
};

int run_monitor_cmd(const CLI::App& cmd, const MonitorArgs& args) {
  std::map<std::string, std::string> file_values;
  std::string config_path = args.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv("GCW_CONFIG")) config_path = env;
  }
  if (!config_path.empty()) file_values = gcwtool::load_config_file(config_path);
  gcwtool::Settings settings(cmd, std::move(file_values));

  monitor::SensorConfig cfg;
  cfg.target_mcc = settings.get<std::string>("mcc", args.mcc);
  cfg.target_mnc = settings.get<std::string>("mnc", args.mnc);
  cfg.probe_duration_s = settings.get<int>("probe-duration", args.probe_duration);
  cfg.watchdog_period_s = settings.get<int>("watchdog-period", args.watchdog_period);
  cfg.watchdog_window_s = settings.get<int>("watchdog-window", args.watchdog_window);
  cfg.watchdog_threshold = settings.get<std::uint64_t>("watchdog-threshold", args.watchdog_threshold);
  cfg.gsmtap_port = settings.get<std::uint16_t>("gsmtap-port", args.gsmtap_port);
  cfg.location_label = settings.get<std::string>("location", args.location);
  cfg.provider_label = settings.get<std::string>("provider", args.provider);
  cfg.exit_on_restart = settings.get<bool>("exit-on-restart", args.exit_on_restart);
  cfg.scan_cmd = settings.get<std::string>("scan-cmd", args.scan_cmd);
  cfg.tune_cmd = settings.get<std::string>("tune-cmd", args.tune_cmd);

  std::string source_spec = settings.get<std::string>("source", args.source);
  std::string log_path = settings.get<std::string>("log", args.log);
  std::string transitions_path = settings.get<std::string>("transitions", args.transitions);
  std::string format = settings.get<std::string>("format", args.format);

  if (cfg.target_mnc.empty()) {
    std::fprintf(stderr, "%s\n", cmd.help().c_str());
    raise(Errc::bad_config, "--mnc is required");
  }
  if (source_spec.empty()) {
    std::fprintf(stderr, "%s\n", cmd.help().c_str());
    raise(Errc::bad_config, "--source is required");
  }
  if (format != "jsonl" && format != "csv") {
    raise(Errc::bad_config, "--format must be jsonl or csv");
  }
  cfg.validate();

  auto record_format = format == "csv" ? monitor::RecordFormat::csv : monitor::RecordFormat::jsonl;
  auto records = log_path.empty() ? monitor::RecordSink::to_stream(stdout, record_format)
                                  : monitor::RecordSink::to_file(log_path, record_format);
  auto transitions = transitions_path.empty()
                         ? monitor::TransitionSink::to_stream(stderr)
                         : monitor::TransitionSink::to_file(transitions_path);

  monitor::MonitorEngine engine(cfg, records, transitions);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  monitor::MonitorStats stats;
  if (capture::source_is_offline(source_spec)) {
    auto source = capture::open_source(source_spec, cfg.gsmtap_port);
    stats = engine.run_offline(*source, &g_stop);
  } else {
    auto source = capture::open_source(source_spec, cfg.gsmtap_port);
    auto* listener = dynamic_cast<capture::UdpListenerSource*>(source.get());
    if (!listener) raise(Errc::bad_config, "live mode requires a udp: source");
    stats = engine.run_live(*listener, g_stop);
  }

  std::fprintf(stderr,
               "frames=%llu si3=%llu cmc=%llu recorded=%llu restarts=%llu malformed=%llu\n",
               static_cast<unsigned long long>(stats.frames),
               static_cast<unsigned long long>(stats.si3_seen),
               static_cast<unsigned long long>(stats.cmc_seen),
               static_cast<unsigned long long>(stats.cmc_recorded),
               static_cast<unsigned long long>(stats.restarts),
               static_cast<unsigned long long>(stats.malformed));
  return 0;
}

// ------------------------------------------------------------------ parse --

struct ParseArgs {
  std::string pcap_path;
  std::string out;
  std::string location, provider;
  std::uint16_t gsmtap_port = gsmtap::kDefaultUdpPort;
  bool include_nociphering = false;
};

int run_parse_cmd(const ParseArgs& args) {
  capture::PcapSource source(args.pcap_path, args.gsmtap_port);

  auto sink = args.out.empty() ? monitor::RecordSink::to_stream(stdout, monitor::RecordFormat::jsonl)
                               : monitor::RecordSink::to_file(args.out, monitor::RecordFormat::jsonl);
  sink.set_enforce_monotone(false);  // capture timestamps may jitter

  std::uint64_t frames = 0, cmc = 0, si3 = 0, skipped = 0;
  um::Si3Info context;
  bool have_context = false;

  while (auto datagram = source.next()) {
    gsmtap::GsmtapFrame frame;
    try {
      frame = gsmtap::parse_gsmtap(datagram->data);
    } catch (const Error&) {
      ++skipped;
      continue;
    }
    if (!frame.is_um()) {
      ++skipped;
      continue;
    }
    ++frames;
    um::UmMessage msg;
    try {
      msg = um::decode(frame);
    } catch (const Error&) {
      ++skipped;
      continue;
    }
    if (const auto* info = std::get_if<um::Si3Info>(&msg.rr)) {
      ++si3;
      context = *info;
      have_context = true;
      continue;
    }
    if (const auto* decision = std::get_if<um::CipherDecision>(&msg.rr)) {
      ++cmc;
      if (!decision->algo && !args.include_nociphering) continue;
      monitor::CmcRecord record;
      record.ts_utc = datagram->ts_utc;
      record.algo = decision->algo;
      if (have_context) {
        record.mcc = context.mcc;
        record.mnc = context.mnc;
        record.lac = context.lac;
        record.cid = context.cell_id;
      }
      record.arfcn = frame.arfcn;
      record.channel = frame.channel();
      record.location = args.location;
      record.provider = args.provider;
      sink.append(record);
    }
  }
  sink.flush();

  const auto& stats = source.stats();
  std::fprintf(stderr, "frames=%llu cmc=%llu si3=%llu skipped=%llu filtered=%llu malformed=%llu\n",
               static_cast<unsigned long long>(frames), static_cast<unsigned long long>(cmc),
               static_cast<unsigned long long>(si3), static_cast<unsigned long long>(skipped),
               static_cast<unsigned long long>(stats.filtered_out),
               static_cast<unsigned long long>(stats.malformed));
  return 0;
}

// ---------------------------------------------------------------- analyze --

struct AnalyzeArgs {
  std::vector<std::string> record_files;
  std::string out = "gcw-analysis";
  std::string timezone = "UTC";
  bool include_nociphering = false;
};

int run_analyze_cmd(const CLI::App& cmd, const AnalyzeArgs& args) {
  gcwtool::Settings settings(cmd, {});
  analytics::AnalyticsOptions options;
  options.include_nociphering = args.include_nociphering;
  options.timezone = analytics::Timezone::parse(settings.get<std::string>("timezone", args.timezone));
  std::string out_dir = settings.get<std::string>("out", args.out);

  std::vector<monitor::CmcRecord> records;
  for (const auto& file : args.record_files) {
    auto batch = monitor::load_records(file);
    records.insert(records.end(), batch.begin(), batch.end());
  }
  auto ds = analytics::CampaignDataset::from_records(std::move(records));

  analytics::export_figures(ds, out_dir, options);

  auto columns = analytics::report_columns(ds, options);
  std::vector<analytics::ProviderSummary> summaries;
  for (const auto& provider : ds.providers()) {
    try {
      summaries.push_back(analytics::provider_mean(ds, provider, options));
    } catch (const Error& e) {
      if (e.code() != Errc::no_data) throw;
    }
  }
  std::fputs(analytics::provider_means_text(summaries, columns).c_str(), stdout);
  std::fprintf(stderr, "records=%zu figures=%s\n", ds.records().size(), out_dir.c_str());
  return 0;
}

// --------------------------------------------------------------------- a5 --

int run_a5_keystream(const std::string& kc_hex, bool has_fn, std::uint32_t fn,
                     const std::string& count_hex) {
  a5::SessionKey key{parse_hex(kc_hex, 16, "kc")};
  auto count = resolve_count(has_fn, fn, count_hex);
  auto ks = a5::a5_keystream(a5::a5_init(key, count));
  std::printf("%s %s\n", hex_string(ks.downlink).c_str(), hex_string(ks.uplink).c_str());
  return 0;
}

int run_a5_recover(const std::string& state_hex, bool has_fn, std::uint32_t fn,
                   const std::string& count_hex) {
  auto state = a5::A5State::from_packed(parse_hex(state_hex, 16, "state"));
  auto count = resolve_count(has_fn, fn, count_hex);
  auto key = a5::recover_kc(state, count);
  std::printf("%016llx\n", static_cast<unsigned long long>(key.kc));
  return 0;
}

int run_a5_xor(const std::string& ct_hex, const std::string& pt_hex) {
  auto ct = parse_hex_bytes(ct_hex, "ct");
  auto pt = parse_hex_bytes(pt_hex, "pt");
  if (ct.size() != pt.size()) {
    raise(Errc::bad_config, "ct and pt must have equal length");
  }
  auto ks = a5::recover_keystream(ct, pt);
  std::printf("%s\n", hex_string(ks).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"passive GSM cipher-usage monitoring toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // monitor
  MonitorArgs margs;
  auto* monitor_cmd = app.add_subcommand("monitor", "run the scan/probe/lock/record sensor");
  monitor_cmd->add_option("--config", margs.config, "TOML-style key=value config file");
  monitor_cmd->add_option("--mcc", margs.mcc, "target MCC (empty matches any)");
  monitor_cmd->add_option("--mnc", margs.mnc, "target MNC");
  monitor_cmd->add_option("--source", margs.source, "udp:PORT | pcap:PATH | replay:PATH");
  monitor_cmd->add_option("--log", margs.log, "record sink path (default: stdout)");
  monitor_cmd->add_option("--transitions", margs.transitions,
                          "session transition log path (default: stderr)");
  monitor_cmd->add_option("--location", margs.location, "location label stamped on records");
  monitor_cmd->add_option("--provider", margs.provider, "provider label stamped on records");
  monitor_cmd->add_option("--format", margs.format, "record format: jsonl or csv");
  monitor_cmd->add_option("--probe-duration", margs.probe_duration, "seconds per channel probe");
  monitor_cmd->add_option("--watchdog-period", margs.watchdog_period, "seconds between checks");
  monitor_cmd->add_option("--watchdog-window", margs.watchdog_window, "SI3 counting window");
  monitor_cmd->add_option("--watchdog-threshold", margs.watchdog_threshold,
                          "restart below this SI3 count");
  monitor_cmd->add_option("--gsmtap-port", margs.gsmtap_port, "GSMTAP UDP port");
  monitor_cmd->add_flag("--exit-on-restart", margs.exit_on_restart,
                        "exit instead of rescanning (for service managers)");
  monitor_cmd->add_option("--scan-cmd", margs.scan_cmd, "scanner command (kalibrate-style output)");
  monitor_cmd->add_option("--tune-cmd", margs.tune_cmd,
                          "tuner command template; {downlink_hz} and {arfcn} are substituted");

  // parse
  ParseArgs pargs;
  auto* parse_cmd = app.add_subcommand("parse", "offline pcap to JSONL records");
  parse_cmd->add_option("pcap", pargs.pcap_path, "capture file")->required();
  parse_cmd->add_option("--out", pargs.out, "record output path (default: stdout)");
  parse_cmd->add_option("--gsmtap-port", pargs.gsmtap_port, "GSMTAP UDP port");
  parse_cmd->add_flag("--include-nociphering", pargs.include_nociphering,
                      "emit records for no-ciphering commands");
  parse_cmd->add_option("--location", pargs.location, "location label");
  parse_cmd->add_option("--provider", pargs.provider, "provider label");

  // analyze
  AnalyzeArgs aargs;
  auto* analyze_cmd = app.add_subcommand("analyze", "campaign statistics and figure data");
  analyze_cmd->add_option("--records", aargs.record_files, "record files (JSONL or CSV)")
      ->required()
      ->expected(-1);
  analyze_cmd->add_option("--out", aargs.out, "output directory");
  analyze_cmd->add_option("--timezone", aargs.timezone,
                          "civil time for hourly buckets: UTC, +HH:MM or IANA name");
  analyze_cmd->add_flag("--include-nociphering", aargs.include_nociphering,
                        "give no-ciphering commands their own share column");

  // a5
  auto* a5_cmd = app.add_subcommand("a5", "A5/1 keystream, key recovery and XOR");
  a5_cmd->require_subcommand(1);
  std::string kc_hex, state_hex, count_hex, ct_hex, pt_hex;
  std::uint32_t fn = 0;
  auto* ks_cmd = a5_cmd->add_subcommand("keystream", "228-bit burst keystream");
  ks_cmd->add_option("--kc", kc_hex, "64-bit session key, hex")->required();
  auto* ks_fn = ks_cmd->add_option("--fn", fn, "GSM frame number");
  ks_cmd->add_option("--count", count_hex, "raw 22-bit COUNT, hex")->excludes(ks_fn);
  auto* rec_cmd = a5_cmd->add_subcommand("recover", "session key from an initial state");
  rec_cmd->add_option("--state", state_hex, "64-bit packed state, hex (r1 | r2<<19 | r3<<41)")
      ->required();
  auto* rec_fn = rec_cmd->add_option("--fn", fn, "GSM frame number");
  rec_cmd->add_option("--count", count_hex, "raw 22-bit COUNT, hex")->excludes(rec_fn);
  auto* xor_cmd = a5_cmd->add_subcommand("xor", "known-plaintext keystream recovery");
  xor_cmd->add_option("--ct", ct_hex, "ciphertext, hex")->required();
  xor_cmd->add_option("--pt", pt_hex, "plaintext, hex")->required();

  // arfcn
  auto* arfcn_cmd = app.add_subcommand("arfcn", "E-GSM 900 channel arithmetic");
  arfcn_cmd->require_subcommand(1);
  std::uint32_t arfcn_value = 0;
  std::int64_t freq_hz = 0;
  auto* tofreq_cmd = arfcn_cmd->add_subcommand("to-freq", "downlink frequency of a channel");
  tofreq_cmd->add_option("arfcn", arfcn_value, "channel number")->required();
  auto* fromfreq_cmd = arfcn_cmd->add_subcommand("from-freq", "channel of a downlink frequency");
  fromfreq_cmd->add_option("hz", freq_hz, "frequency in Hz")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::fprintf(stderr, "error: %s\n%s\n", e.what(), app.help().c_str());
    return 2;
  }

  try {
    if (monitor_cmd->parsed()) return run_monitor_cmd(*monitor_cmd, margs);
    if (parse_cmd->parsed()) return run_parse_cmd(pargs);
    if (analyze_cmd->parsed()) return run_analyze_cmd(*analyze_cmd, aargs);
    if (a5_cmd->parsed()) {
      if (ks_cmd->parsed()) return run_a5_keystream(kc_hex, ks_fn->count() > 0, fn, count_hex);
      if (rec_cmd->parsed()) return run_a5_recover(state_hex, rec_fn->count() > 0, fn, count_hex);
      if (xor_cmd->parsed()) return run_a5_xor(ct_hex, pt_hex);
    }
    if (arfcn_cmd->parsed()) {
      if (tofreq_cmd->parsed()) {
        std::printf("%lld\n",
                    static_cast<long long>(monitor::arfcn_to_downlink_hz(arfcn_value)));
        return 0;
      }
      if (fromfreq_cmd->parsed()) {
        std::printf("%u\n", monitor::arfcn_from_downlink_hz(freq_hz));
        return 0;
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
