// SPDX-License-Identifier: MIT

#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace gcwtool {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string normalize_key(std::string key) {
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) gcw::raise(gcw::Errc::bad_config, "cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      gcw::raise(gcw::Errc::bad_config,
                 path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto key = normalize_key(trim(line.substr(0, eq)));
    auto value = unquote(trim(line.substr(eq + 1)));
    if (key.empty()) {
      gcw::raise(gcw::Errc::bad_config, path + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

std::string Settings::env_name(const std::string& key) {
  std::string name = "GCW_";
  for (char c : key) {
    name.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return name;
}

template <>
std::string parse_setting<std::string>(const std::string&, const std::string& text) {
  return text;
}

template <>
int parse_setting<int>(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    gcw::raise(gcw::Errc::bad_config, "setting " + key + ": '" + text + "' is not an integer");
  }
}

template <>
std::uint64_t parse_setting<std::uint64_t>(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    gcw::raise(gcw::Errc::bad_config, "setting " + key + ": '" + text + "' is not an integer");
  }
}

template <>
std::uint16_t parse_setting<std::uint16_t>(const std::string& key, const std::string& text) {
  auto v = parse_setting<std::uint64_t>(key, text);
  if (v > 0xFFFF) {
    gcw::raise(gcw::Errc::bad_config, "setting " + key + ": " + text + " exceeds 65535");
  }
  return static_cast<std::uint16_t>(v);
}

template <>
bool parse_setting<bool>(const std::string& key, const std::string& text) {
  std::string v = text;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  gcw::raise(gcw::Errc::bad_config, "setting " + key + ": '" + text + "' is not a boolean");
}

}  // namespace gcwtool
