// SPDX-License-Identifier: MIT

#include "gcw/errors.hpp"

namespace gcw {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::too_short: return "TooShort";
    case Errc::unsupported_version: return "UnsupportedVersion";
    case Errc::source_unavailable: return "SourceUnavailable";
    case Errc::corrupt_capture_header: return "CorruptCaptureHeader";
    case Errc::unsupported_link_type: return "UnsupportedLinkType";
    case Errc::bad_length: return "BadLength";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::unsupported_channel: return "UnsupportedChannel";
    case Errc::truncated: return "Truncated";
    case Errc::bad_bcd: return "BadBcd";
    case Errc::frame_number_out_of_range: return "FrameNumberOutOfRange";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::invalid_arfcn: return "InvalidArfcn";
    case Errc::no_provider_found: return "NoProviderFound";
    case Errc::empty_cell: return "EmptyCell";
    case Errc::no_data: return "NoData";
    case Errc::bad_config: return "BadConfig";
    case Errc::io_failure: return "IoFailure";
    case Errc::bad_record: return "BadRecord";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace gcw
