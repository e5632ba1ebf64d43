// SPDX-License-Identifier: MIT

#pragma once

#include <stdexcept>
#include <string>

namespace gcw {

// Error conditions raised across the toolkit. Stream readers catch and count
// per-datagram codes; everything else propagates to the caller.
enum class Errc {
  // gsmtap / capture
  too_short,
  unsupported_version,
  source_unavailable,
  corrupt_capture_header,
  unsupported_link_type,
  // um parsing
  bad_length,
  malformed_header,
  unsupported_channel,
  truncated,
  bad_bcd,
  // a5
  frame_number_out_of_range,
  length_mismatch,
  not_invertible,
  // monitor
  invalid_arfcn,
  no_provider_found,
  // analytics
  empty_cell,
  no_data,
  // configuration / IO / record files
  bad_config,
  io_failure,
  bad_record,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace gcw
