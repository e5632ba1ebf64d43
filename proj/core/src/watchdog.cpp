// SPDX-License-Identifier: MIT

#include "gcw/watchdog.hpp"

#include <chrono>

namespace gcw::monitor {

const char* watchdog_action_name(WatchdogAction action) noexcept {
  return action == WatchdogAction::restart ? "restart" : "continue";
}

WatchdogAction evaluate_si3_count(std::uint64_t si3_count_in_window,
                                  std::uint64_t threshold) noexcept {
  return si3_count_in_window < threshold ? WatchdogAction::restart : WatchdogAction::proceed;
}

WatchdogSchedule::WatchdogSchedule(double period_s, double window_s)
    : period_(period_s), window_(window_s) {}

void WatchdogSchedule::arm(double now) {
  armed_ = true;
  window_start_ = now + period_ - window_;
  count_ = 0;
}

void WatchdogSchedule::on_si3(double now) noexcept {
  if (!armed_) return;
  if (now >= window_start_ && now < window_start_ + window_) ++count_;
}

std::vector<WatchdogSchedule::Check> WatchdogSchedule::advance(double now) {
  std::vector<Check> due;
  while (armed_ && now >= window_start_ + window_) {
    due.push_back(Check{window_start_ + window_, count_});
    window_start_ += period_;
    count_ = 0;
  }
  return due;
}

LiveWatchdog::LiveWatchdog(double period_s, double window_s, std::uint64_t threshold)
    : period_(period_s), window_(window_s), threshold_(threshold) {}

LiveWatchdog::~LiveWatchdog() { stop(); }

void LiveWatchdog::start() {
  stop_.store(false, std::memory_order_relaxed);
  restart_.store(false, std::memory_order_relaxed);
  si3_counter_.store(0, std::memory_order_relaxed);
  thread_ = std::thread([this] { run(); });
}

void LiveWatchdog::stop() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_.store(true, std::memory_order_relaxed);
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

bool LiveWatchdog::interruptible_sleep(double seconds) {
  std::unique_lock<std::mutex> lock(mutex_);
  return !cv_.wait_for(lock, std::chrono::duration<double>(seconds),
                       [this] { return stop_.load(std::memory_order_relaxed); });
}

void LiveWatchdog::run() {
  for (;;) {
    if (!interruptible_sleep(period_ - window_)) return;
    si3_counter_.exchange(0, std::memory_order_relaxed);
    if (!interruptible_sleep(window_)) return;
    std::uint64_t count = si3_counter_.exchange(0, std::memory_order_relaxed);
    last_count_.store(count, std::memory_order_relaxed);
    if (evaluate_si3_count(count, threshold_) == WatchdogAction::restart) {
      restart_.store(true, std::memory_order_relaxed);
    }
  }
}

}  // namespace gcw::monitor
