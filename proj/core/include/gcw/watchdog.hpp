// SPDX-License-Identifier: MIT

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gcw::monitor {

enum class WatchdogAction { proceed, restart };

const char* watchdog_action_name(WatchdogAction action) noexcept;

// Restart iff the window count fell below the threshold ("falls below" is
// strict). Monotone in count.
WatchdogAction evaluate_si3_count(std::uint64_t si3_count_in_window,
                                  std::uint64_t threshold) noexcept;

// Deterministic watchdog bookkeeping driven by explicit timestamps, used on
// the simulated clock of offline runs. After arm(t0), counting window k
// (k = 1, 2, ...) is [t0 + k*period - window, t0 + k*period); the count is
// evaluated when time passes the window end.
class WatchdogSchedule {
 public:
  WatchdogSchedule(double period_s, double window_s);

  void arm(double now);
  void disarm() noexcept { armed_ = false; }
  bool armed() const noexcept { return armed_; }

  // Counts an SI3 observation if `now` falls inside the open window.
  void on_si3(double now) noexcept;

  struct Check {
    double at = 0;  // window end
    std::uint64_t si3_count = 0;
  };

  // Advances the schedule to `now`, returning every window evaluation that
  // fell due (possibly several if time jumped).
  std::vector<Check> advance(double now);

 private:
  double period_;
  double window_;
  bool armed_ = false;
  double window_start_ = 0;
  std::uint64_t count_ = 0;
};

// Wall-clock watchdog for live capture: a periodic timer thread sharing an
// SI3 counter (atomic, swap-to-zero) and a restart flag with the ingestion
// loop. Each cycle sleeps period-window, zeroes the counter, sleeps the
// window, then evaluates the accumulated count.
class LiveWatchdog {
 public:
  LiveWatchdog(double period_s, double window_s, std::uint64_t threshold);
  ~LiveWatchdog();

  LiveWatchdog(const LiveWatchdog&) = delete;
  LiveWatchdog& operator=(const LiveWatchdog&) = delete;

  void start();
  void stop();

  void count_si3() noexcept { si3_counter_.fetch_add(1, std::memory_order_relaxed); }

  bool restart_requested() const noexcept {
    return restart_.load(std::memory_order_relaxed);
  }
  // Consumes the flag; returns the count that tripped it.
  std::uint64_t acknowledge_restart() noexcept {
    restart_.store(false, std::memory_order_relaxed);
    return last_count_.load(std::memory_order_relaxed);
  }

 private:
  void run();
  bool interruptible_sleep(double seconds);

  double period_;
  double window_;
  std::uint64_t threshold_;
  std::atomic<std::uint64_t> si3_counter_{0};
  std::atomic<std::uint64_t> last_count_{0};
  std::atomic<bool> restart_{false};
  std::atomic<bool> stop_{false};
  std::mutex mutex_;
  std::condition_variable cv_;
  std::thread thread_;
};

}  // namespace gcw::monitor
