// SPDX-License-Identifier: MIT

#include "gcw/capture.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gcw/pcap.hpp"

namespace gcw::capture {

DatagramSource::Wait DatagramSource::wait(Datagram& out, std::chrono::milliseconds) {
  auto d = next();
  if (!d) return Wait::closed;
  out = std::move(*d);
  return Wait::ready;
}

ReplaySource::ReplaySource(std::vector<Datagram> datagrams) : datagrams_(std::move(datagrams)) {}

std::optional<Datagram> ReplaySource::next() {
  if (index_ >= datagrams_.size()) return std::nullopt;
  return datagrams_[index_++];
}

UdpListenerSource::UdpListenerSource(std::uint16_t port, const std::string& bind_address)
    : port_(port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) {
    raise(Errc::source_unavailable, std::string("socket: ") + std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    fd_ = -1;
    raise(Errc::source_unavailable, "bad bind address " + bind_address);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    raise(Errc::source_unavailable, "bind 0.0.0.0:" + std::to_string(port) + " failed: " +
                                        std::strerror(err));
  }
  if (port == 0) {
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0) {
      port_ = ntohs(bound.sin_port);
    }
  }
}

UdpListenerSource::~UdpListenerSource() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<Datagram> UdpListenerSource::next() {
  Datagram d;
  for (;;) {
    switch (wait(d, std::chrono::milliseconds(200))) {
      case Wait::ready: return d;
      case Wait::closed: return std::nullopt;
      case Wait::timeout: break;  // poll again unless stopped
    }
  }
}

DatagramSource::Wait UdpListenerSource::wait(Datagram& out, std::chrono::milliseconds timeout) {
  if (stopped_.load(std::memory_order_relaxed) || fd_ < 0) return Wait::closed;
  pollfd pfd{fd_, POLLIN, 0};
  int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (stopped_.load(std::memory_order_relaxed)) return Wait::closed;
  if (rc == 0) return Wait::timeout;
  if (rc < 0) {
    if (errno == EINTR) return Wait::timeout;
    return Wait::closed;
  }
  std::uint8_t buf[65536];
  ssize_t n = ::recvfrom(fd_, buf, sizeof(buf), 0, nullptr, nullptr);
  if (n < 0) return Wait::timeout;
  out.ts_utc = std::chrono::duration<double>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();
  out.data.assign(buf, buf + n);
  return Wait::ready;
}

void UdpListenerSource::stop() { stopped_.store(true, std::memory_order_relaxed); }

namespace {

std::uint8_t hex_nibble(char c) {
  if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
  raise(Errc::bad_record, std::string("invalid hex character '") + c + "'");
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) raise(Errc::bad_record, "odd-length hex string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((hex_nibble(hex[2 * i]) << 4) | hex_nibble(hex[2 * i + 1]));
  }
  return out;
}

bool has_pcap_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::uint8_t magic[4];
  if (!in.read(reinterpret_cast<char*>(magic), 4)) return false;
  auto is = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    return magic[0] == a && magic[1] == b && magic[2] == c && magic[3] == d;
  };
  return is(0xd4, 0xc3, 0xb2, 0xa1) || is(0xa1, 0xb2, 0xc3, 0xd4) ||
         is(0x4d, 0x3c, 0xb2, 0xa1) || is(0xa1, 0xb2, 0x3c, 0x4d);
}

}  // namespace

std::vector<Datagram> load_replay_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::source_unavailable, "cannot open replay file " + path);
  std::vector<Datagram> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      Datagram d;
      d.ts_utc = j.at("ts").get<double>();
      d.data = parse_hex(j.at("data").get<std::string>());
      out.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::bad_record, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::unique_ptr<DatagramSource> open_source(const std::string& spec, std::uint16_t gsmtap_port) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    raise(Errc::bad_config, "source must be udp:PORT, pcap:PATH or replay:PATH, got '" + spec + "'");
  }
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "udp") {
    int port = -1;
    try {
      std::size_t used = 0;
      port = std::stoi(rest, &used);
      if (used != rest.size()) port = -1;
    } catch (const std::exception&) {
      port = -1;
    }
    if (port < 0 || port > 65535) {
      raise(Errc::bad_config, "bad udp port '" + rest + "'");
    }
    return std::make_unique<UdpListenerSource>(static_cast<std::uint16_t>(port));
  }
  if (kind == "pcap") {
    return std::make_unique<PcapSource>(rest, gsmtap_port);
  }
  if (kind == "replay") {
    if (has_pcap_magic(rest)) {
      return std::make_unique<PcapSource>(rest, gsmtap_port);
    }
    return std::make_unique<ReplaySource>(load_replay_jsonl(rest));
  }
  raise(Errc::bad_config, "unknown source kind '" + kind + "'");
}

bool source_is_offline(const std::string& spec) {
  return spec.rfind("pcap:", 0) == 0 || spec.rfind("replay:", 0) == 0;
}

}  // namespace gcw::capture
