// SPDX-License-Identifier: MIT

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcw/errors.hpp"

namespace gcw::capture {

struct Datagram {
  double ts_utc = 0;  // seconds, fractional
  std::vector<std::uint8_t> data;

  bool operator==(const Datagram&) const = default;
};

// Ordered stream of raw datagrams. End of stream is an explicit event
// (std::nullopt), never an error.
class DatagramSource {
 public:
  enum class Wait { ready, timeout, closed };

  virtual ~DatagramSource() = default;
  virtual std::optional<Datagram> next() = 0;

  // Bounded wait used by live ingestion loops. Offline sources never time
  // out: they report ready or closed immediately.
  virtual Wait wait(Datagram& out, std::chrono::milliseconds timeout);
};

// Scripted in-memory replay: yields exactly the given datagrams in order.
class ReplaySource : public DatagramSource {
 public:
  explicit ReplaySource(std::vector<Datagram> datagrams);
  std::optional<Datagram> next() override;

 private:
  std::vector<Datagram> datagrams_;
  std::size_t index_ = 0;
};

// Blocking UDP listener, one GSMTAP message per datagram. Timestamps are
// receive time. stop() makes pending and future calls drain to closed.
class UdpListenerSource : public DatagramSource {
 public:
  explicit UdpListenerSource(std::uint16_t port, const std::string& bind_address = "0.0.0.0");
  ~UdpListenerSource() override;

  UdpListenerSource(const UdpListenerSource&) = delete;
  UdpListenerSource& operator=(const UdpListenerSource&) = delete;

  std::optional<Datagram> next() override;
  Wait wait(Datagram& out, std::chrono::milliseconds timeout) override;
  void stop();
  std::uint16_t port() const noexcept { return port_; }

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopped_{false};
};

// Replay file: JSON Lines of {"ts": <seconds>, "data": "<hex>"}.
std::vector<Datagram> load_replay_jsonl(const std::string& path);

// Source factory for the CLI spec strings "udp:PORT", "pcap:PATH",
// "replay:PATH". A replay path may hold either a pcap capture (detected by
// magic) or the JSONL format above.
std::unique_ptr<DatagramSource> open_source(const std::string& spec, std::uint16_t gsmtap_port);

// True when `spec` names an offline source (pcap/replay), i.e. the monitor
// should run on the simulated clock derived from datagram timestamps.
bool source_is_offline(const std::string& spec);

}  // namespace gcw::capture
