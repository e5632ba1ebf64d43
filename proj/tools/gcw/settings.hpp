// SPDX-License-Identifier: MIT

#pragma once

#include <map>
#include <string>

#include <CLI11.hpp>

#include "gcw/errors.hpp"

namespace gcwtool {

// Flat TOML-style key/value file: `key = value`, '#' comments, optional
// quotes. Section headers are tolerated and ignored.
std::map<std::string, std::string> load_config_file(const std::string& path);

template <typename T>
T parse_setting(const std::string& key, const std::string& text);

// Configuration precedence: command-line flag > GCW_* environment variable >
// config file entry > built-in default (held by the CLI11 option).
class Settings {
 public:
  Settings(const CLI::App& cmd, std::map<std::string, std::string> file_values)
      : cmd_(cmd), file_(std::move(file_values)) {}

  // `key` is the long option name without dashes, e.g. "watchdog-threshold".
  template <typename T>
  T get(const std::string& key, const T& flag_value) const {
    if (cmd_.count("--" + key) > 0) return flag_value;
    if (const char* env = std::getenv(env_name(key).c_str())) {
      return parse_setting<T>(key, env);
    }
    auto it = file_.find(key);
    if (it != file_.end()) return parse_setting<T>(key, it->second);
    return flag_value;
  }

  static std::string env_name(const std::string& key);

 private:
  const CLI::App& cmd_;
  std::map<std::string, std::string> file_;
};

}  // namespace gcwtool
