#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace slakit {

using UtcSeconds = std::chrono::sys_seconds;

/// Parses the strict form YYYY-MM-DDTHH:MM:SSZ. Offsets other than Z,
/// fractional seconds and out-of-range fields are rejected.
std::optional<UtcSeconds> parse_utc(std::string_view text);

std::string format_utc(UtcSeconds t);

/// YYYY-MM-DDTHH:MM:SS.ffffffZ, used for store metadata.
std::string format_utc_micros(std::chrono::system_clock::time_point t);

}  // namespace slakit
