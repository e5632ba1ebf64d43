// SPDX-License-Identifier: MIT

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "gcw/capture.hpp"
#include "gcw/records.hpp"
#include "gcw/scan.hpp"
#include "gcw/um.hpp"
#include "gcw/watchdog.hpp"

namespace gcw::monitor {

struct SensorConfig {
  std::string target_mcc;  // empty matches any MCC
  std::string target_mnc;  // required
  int probe_duration_s = 10;
  int watchdog_period_s = 300;
  int watchdog_window_s = 30;
  std::uint64_t watchdog_threshold = 5;  // SI3 count per window
  std::uint16_t gsmtap_port = gsmtap::kDefaultUdpPort;
  std::string location_label;
  std::string provider_label;
  // Restart behaviour: in-process rescan by default; true exits instead so an
  // external service manager can respawn the sensor.
  bool exit_on_restart = false;
  // Subprocess adapters for live capture. scan_cmd produces kalibrate-style
  // output on stdout; tune_cmd is started per channel with {downlink_hz} and
  // {arfcn} substituted and is expected to feed GSMTAP to the UDP port.
  std::string scan_cmd;
  std::string tune_cmd;

  void validate() const;  // throws BadConfig
};

inline WatchdogAction watchdog_evaluate(std::uint64_t si3_count_in_window,
                                        const SensorConfig& cfg) noexcept {
  return evaluate_si3_count(si3_count_in_window, cfg.watchdog_threshold);
}

enum class Phase { scanning, probing, locked, restarting, stopped };
const char* phase_name(Phase phase) noexcept;

struct LockedCell {
  std::uint16_t arfcn = 0;
  um::Si3Info si3;
};

// True when the SI3 cell identity matches the configured provider.
bool si3_matches_target(const um::Si3Info& si3, const SensorConfig& cfg) noexcept;

using ProbeFn = std::function<std::optional<um::Si3Info>(std::uint16_t arfcn, int duration_s)>;

// Probes scan candidates in descending power order and locks the first whose
// SI3 matches the configured provider. Throws NoProviderFound when every
// candidate is exhausted.
LockedCell select_channel(const ScanResult& scan, const SensorConfig& cfg, const ProbeFn& probe);

class ChildProcess;

struct MonitorStats {
  std::uint64_t datagrams = 0;
  std::uint64_t frames = 0;  // GSMTAP frames parsed
  std::uint64_t non_um = 0;
  std::uint64_t malformed = 0;
  std::uint64_t skipped_channel = 0;  // channels without L2 decoding
  std::uint64_t other_messages = 0;
  std::uint64_t si3_seen = 0;
  std::uint64_t cmc_seen = 0;
  std::uint64_t cmc_recorded = 0;
  std::uint64_t cmc_before_lock = 0;
  std::uint64_t restarts = 0;
};

// The scan / probe / lock / record / watchdog lifecycle.
class MonitorEngine {
 public:
  MonitorEngine(const SensorConfig& cfg, RecordSink& records, TransitionSink& transitions);

  // Offline replay: the clock is simulated from datagram timestamps, so
  // watchdog behaviour is deterministic and runs at full speed. A set `stop`
  // flag (e.g. from a signal handler) flushes and ends the run cleanly.
  MonitorStats run_offline(capture::DatagramSource& source,
                           const std::atomic<bool>* stop = nullptr);

  // Live capture from a UDP listener on the wall clock. The watchdog runs on
  // its own timer thread; `stop` (typically set by a signal handler) ends the
  // session cleanly. When cfg.scan_cmd is empty the incoming stream is probed
  // directly; otherwise scan/tune subprocess adapters drive channel selection.
  MonitorStats run_live(capture::UdpListenerSource& source, const std::atomic<bool>& stop);

  const MonitorStats& stats() const noexcept { return stats_; }

 private:
  struct Session {
    Phase phase = Phase::scanning;
    std::optional<LockedCell> cell;
  };

  void transition(double ts, Phase to, const std::string& reason);
  void handle_datagram(double ts, std::span<const std::uint8_t> data, WatchdogSchedule* schedule,
                       LiveWatchdog* live_watchdog);
  void handle_restart(double ts, std::uint64_t count, WatchdogSchedule* schedule);
  std::optional<um::Si3Info> probe_channel_live(capture::UdpListenerSource& source,
                                                ChildProcess& tuner, std::uint16_t arfcn,
                                                int duration_s, const std::atomic<bool>& stop);

  const SensorConfig& cfg_;
  RecordSink& records_;
  TransitionSink& transitions_;
  MonitorStats stats_;
  Session session_;
  bool stop_requested_ = false;
};

// Runs a shell command and captures its stdout (scanner adapter).
std::string run_command_capture(const std::string& command);

// Tuner subprocess handle. start() spawns `/bin/sh -c cmd`; stop() sends
// SIGTERM, then SIGKILL after a grace period.
class ChildProcess {
 public:
  ChildProcess() = default;
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  void start(const std::string& command);
  void stop();
  bool running() const noexcept { return pid_ > 0; }

 private:
  int pid_ = -1;
};

// Substitutes {downlink_hz} and {arfcn} placeholders in a tuner command.
std::string expand_tune_command(const std::string& command_template, std::uint16_t arfcn);

}  // namespace gcw::monitor
