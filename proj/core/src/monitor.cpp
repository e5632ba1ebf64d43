// SPDX-License-Identifier: MIT

#include "gcw/monitor.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <thread>

#include "gcw/arfcn.hpp"

namespace gcw::monitor {

void SensorConfig::validate() const {
  if (target_mnc.empty()) raise(Errc::bad_config, "target MNC must be set");
  if (probe_duration_s <= 0) raise(Errc::bad_config, "probe duration must be positive");
  if (watchdog_window_s <= 0 || watchdog_period_s <= 0) {
    raise(Errc::bad_config, "watchdog period and window must be positive");
  }
  if (watchdog_window_s > watchdog_period_s) {
    raise(Errc::bad_config, "watchdog window must not exceed the period");
  }
}

const char* phase_name(Phase phase) noexcept {
  switch (phase) {
    case Phase::scanning: return "scanning";
    case Phase::probing: return "probing";
    case Phase::locked: return "locked";
    case Phase::restarting: return "restarting";
    case Phase::stopped: return "stopped";
  }
  return "?";
}

bool si3_matches_target(const um::Si3Info& si3, const SensorConfig& cfg) noexcept {
  if (si3.mnc != cfg.target_mnc) return false;
  return cfg.target_mcc.empty() || si3.mcc == cfg.target_mcc;
}

LockedCell select_channel(const ScanResult& scan, const SensorConfig& cfg, const ProbeFn& probe) {
  if (scan.entries.empty()) {
    raise(Errc::no_provider_found, "scan produced no candidate channels");
  }
  std::vector<ScanEntry> candidates = scan.entries;
  std::stable_sort(candidates.begin(), candidates.end(), [](const ScanEntry& a, const ScanEntry& b) {
    return a.power > b.power;
  });
  for (const auto& candidate : candidates) {
    auto si3 = probe(candidate.arfcn, cfg.probe_duration_s);
    if (si3 && si3_matches_target(*si3, cfg)) {
      return LockedCell{candidate.arfcn, *si3};
    }
  }
  raise(Errc::no_provider_found,
        "no candidate broadcast MNC " + cfg.target_mnc +
            (cfg.target_mcc.empty() ? "" : " / MCC " + cfg.target_mcc));
}

MonitorEngine::MonitorEngine(const SensorConfig& cfg, RecordSink& records,
                             TransitionSink& transitions)
    : cfg_(cfg), records_(records), transitions_(transitions) {
  cfg.validate();
}

void MonitorEngine::transition(double ts, Phase to, const std::string& reason) {
  transitions_.append(Transition{ts, phase_name(session_.phase), phase_name(to), reason});
  session_.phase = to;
}

void MonitorEngine::handle_restart(double ts, std::uint64_t count, WatchdogSchedule* schedule) {
  ++stats_.restarts;
  transition(ts, Phase::restarting,
             "watchdog: si3 count " + std::to_string(count) + " < threshold " +
                 std::to_string(cfg_.watchdog_threshold));
  session_.cell.reset();
  if (schedule) schedule->disarm();
  if (cfg_.exit_on_restart) {
    stop_requested_ = true;
    return;
  }
  transition(ts, Phase::scanning, "rescan after restart");
  transition(ts, Phase::probing, "probing stream for provider SI3");
}

void MonitorEngine::handle_datagram(double ts, std::span<const std::uint8_t> data,
                                    WatchdogSchedule* schedule, LiveWatchdog* live_watchdog) {
  ++stats_.datagrams;
  gsmtap::GsmtapFrame frame;
  try {
    frame = gsmtap::parse_gsmtap(data);
  } catch (const Error&) {
    ++stats_.malformed;
    return;
  }
  if (!frame.is_um()) {
    ++stats_.non_um;
    return;
  }
  ++stats_.frames;

  um::UmMessage msg;
  try {
    msg = um::decode(frame);
  } catch (const Error& e) {
    if (e.code() == Errc::unsupported_channel) {
      ++stats_.skipped_channel;
    } else {
      ++stats_.malformed;
    }
    return;
  }

  if (const auto* si3 = std::get_if<um::Si3Info>(&msg.rr)) {
    ++stats_.si3_seen;
    if (schedule) schedule->on_si3(ts);
    if (live_watchdog) live_watchdog->count_si3();
    if (session_.phase == Phase::probing && si3_matches_target(*si3, cfg_)) {
      session_.cell = LockedCell{frame.arfcn, *si3};
      transition(ts, Phase::locked,
                 "si3 match on arfcn " + std::to_string(frame.arfcn) + " (mcc " + si3->mcc +
                     " mnc " + si3->mnc + " lac " + std::to_string(si3->lac) + " cid " +
                     std::to_string(si3->cell_id) + ")");
      if (schedule) schedule->arm(ts);
    } else if (session_.phase == Phase::locked && session_.cell &&
               si3_matches_target(*si3, cfg_)) {
      // Cell identity may legitimately change (reconfiguration); keep the
      // provider fixed and track the latest LAC/CID.
      session_.cell->si3 = *si3;
    }
    return;
  }

  if (const auto* decision = std::get_if<um::CipherDecision>(&msg.rr)) {
    ++stats_.cmc_seen;
    if (session_.phase != Phase::locked || !session_.cell) {
      ++stats_.cmc_before_lock;
      return;
    }
    if (!gsmtap::is_dedicated(frame.channel())) {
      // A CMC outside SDCCH/SACCH is not a plausible observation.
      ++stats_.malformed;
      return;
    }
    CmcRecord record;
    record.ts_utc = ts;
    record.algo = decision->algo;
    record.mcc = session_.cell->si3.mcc;
    record.mnc = session_.cell->si3.mnc;
    record.lac = session_.cell->si3.lac;
    record.cid = session_.cell->si3.cell_id;
    record.arfcn = frame.arfcn;
    record.channel = frame.channel();
    record.location = cfg_.location_label;
    record.provider = cfg_.provider_label;
    records_.append(record);
    ++stats_.cmc_recorded;
    return;
  }

  ++stats_.other_messages;
}

MonitorStats MonitorEngine::run_offline(capture::DatagramSource& source,
                                        const std::atomic<bool>* stop) {
  stats_ = MonitorStats{};
  session_ = Session{};
  stop_requested_ = false;

  WatchdogSchedule schedule(cfg_.watchdog_period_s, cfg_.watchdog_window_s);
  bool first = true;
  double last_ts = 0;

  while (!stop_requested_ && !(stop && stop->load(std::memory_order_relaxed))) {
    auto datagram = source.next();
    if (!datagram) break;  // normal end of stream
    double ts = datagram->ts_utc;
    if (first) {
      transition(ts, Phase::probing, "offline source: probing stream for provider SI3");
      first = false;
    }
    for (const auto& check : schedule.advance(ts)) {
      if (watchdog_evaluate(check.si3_count, cfg_) == WatchdogAction::restart) {
        handle_restart(check.at, check.si3_count, &schedule);
        if (stop_requested_) break;
      }
    }
    if (stop_requested_) break;
    handle_datagram(ts, datagram->data, &schedule, nullptr);
    last_ts = ts;
  }

  records_.flush();
  const char* reason = "end of stream";
  if (stop && stop->load(std::memory_order_relaxed)) {
    reason = "stop requested";
  } else if (stop_requested_) {
    reason = "restart requested, exiting for supervisor";
  }
  transition(last_ts, Phase::stopped, reason);
  transitions_.flush();
  return stats_;
}

namespace {

double wall_now() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

MonitorStats MonitorEngine::run_live(capture::UdpListenerSource& source,
                                     const std::atomic<bool>& stop) {
  stats_ = MonitorStats{};
  session_ = Session{};
  stop_requested_ = false;

  ChildProcess tuner;
  LiveWatchdog watchdog(cfg_.watchdog_period_s, cfg_.watchdog_window_s, cfg_.watchdog_threshold);

  while (!stop.load(std::memory_order_relaxed) && !stop_requested_) {
    // Channel selection. Without a scanner the stream itself is probed.
    if (!cfg_.scan_cmd.empty()) {
      transition(wall_now(), Phase::scanning, "running scanner");
      ScanResult scan;
      try {
        scan = parse_scan_output(run_command_capture(cfg_.scan_cmd));
      } catch (const Error& e) {
        transition(wall_now(), Phase::scanning, std::string("scan failed: ") + e.what());
        std::this_thread::sleep_for(std::chrono::seconds(1));
        continue;
      }
      transition(wall_now(), Phase::probing,
                 "probing " + std::to_string(scan.entries.size()) + " candidates");
      LockedCell cell;
      try {
        cell = select_channel(scan, cfg_, [&](std::uint16_t arfcn, int duration_s) {
          return probe_channel_live(source, tuner, arfcn, duration_s, stop);
        });
      } catch (const Error&) {
        if (stop.load(std::memory_order_relaxed)) break;
        transition(wall_now(), Phase::scanning, "no provider found, rescanning");
        std::this_thread::sleep_for(std::chrono::seconds(1));
        continue;
      }
      session_.cell = cell;
      transition(wall_now(), Phase::locked,
                 "si3 match on arfcn " + std::to_string(cell.arfcn) + " (mcc " + cell.si3.mcc +
                     " mnc " + cell.si3.mnc + ")");
      if (!cfg_.tune_cmd.empty()) {
        tuner.start(expand_tune_command(cfg_.tune_cmd, cell.arfcn));
      }
      watchdog.start();
    } else if (session_.phase != Phase::probing) {
      transition(wall_now(), Phase::probing, "udp source: probing stream for provider SI3");
    }

    bool watchdog_started = session_.phase == Phase::locked;
    // Ingest until stop or watchdog restart.
    while (!stop.load(std::memory_order_relaxed) && !stop_requested_) {
      capture::Datagram d;
      auto status = source.wait(d, std::chrono::milliseconds(200));
      if (status == capture::DatagramSource::Wait::closed) {
        stop_requested_ = true;
        break;
      }
      if (status == capture::DatagramSource::Wait::ready) {
        bool was_probing = session_.phase == Phase::probing;
        handle_datagram(d.ts_utc, d.data, nullptr, watchdog_started ? &watchdog : nullptr);
        if (was_probing && session_.phase == Phase::locked && !watchdog_started) {
          watchdog.start();
          watchdog_started = true;
        }
      }
      if (watchdog_started && watchdog.restart_requested()) {
        std::uint64_t count = watchdog.acknowledge_restart();
        watchdog.stop();
        tuner.stop();
        handle_restart(wall_now(), count, nullptr);
        break;
      }
    }
    if (watchdog_started) watchdog.stop();
    tuner.stop();
  }

  records_.flush();
  transition(wall_now(), Phase::stopped, "shutdown");
  transitions_.flush();
  return stats_;
}

std::optional<um::Si3Info> MonitorEngine::probe_channel_live(capture::UdpListenerSource& source,
                                                             ChildProcess& tuner,
                                                             std::uint16_t arfcn, int duration_s,
                                                             const std::atomic<bool>& stop) {
  if (!cfg_.tune_cmd.empty()) {
    tuner.start(expand_tune_command(cfg_.tune_cmd, arfcn));
  }
  std::optional<um::Si3Info> seen;
  double deadline = wall_now() + duration_s;
  while (wall_now() < deadline && !stop.load(std::memory_order_relaxed)) {
    capture::Datagram d;
    auto status = source.wait(d, std::chrono::milliseconds(100));
    if (status == capture::DatagramSource::Wait::closed) break;
    if (status != capture::DatagramSource::Wait::ready) continue;
    try {
      auto frame = gsmtap::parse_gsmtap(d.data);
      if (!frame.is_um()) continue;
      auto msg = um::decode(frame);
      if (const auto* si3 = std::get_if<um::Si3Info>(&msg.rr)) {
        seen = *si3;
        break;
      }
    } catch (const Error&) {
      continue;
    }
  }
  tuner.stop();
  return seen;
}

std::string run_command_capture(const std::string& command) {
  std::FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) {
    raise(Errc::source_unavailable, "cannot run scanner command: " + command);
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    out.append(buf, n);
  }
  int rc = ::pclose(pipe);
  if (rc != 0) {
    raise(Errc::source_unavailable,
          "scanner command exited with status " + std::to_string(rc) + ": " + command);
  }
  return out;
}

ChildProcess::~ChildProcess() { stop(); }

void ChildProcess::start(const std::string& command) {
  stop();
  int pid = ::fork();
  if (pid < 0) {
    raise(Errc::source_unavailable, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);  // own process group so stop() reaches grandchildren
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  pid_ = pid;
}

void ChildProcess::stop() {
  if (pid_ <= 0) return;
  ::kill(-pid_, SIGTERM);
  for (int i = 0; i < 20; ++i) {
    int status = 0;
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      ::kill(-pid_, SIGKILL);  // sweep any stragglers in the group
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  ::kill(-pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  pid_ = -1;
}

std::string expand_tune_command(const std::string& command_template, std::uint16_t arfcn) {
  std::string out = command_template;
  auto replace_all = [&out](const std::string& needle, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  };
  replace_all("{downlink_hz}", std::to_string(arfcn_to_downlink_hz(arfcn)));
  replace_all("{arfcn}", std::to_string(arfcn));
  return out;
}

}  // namespace gcw::monitor
