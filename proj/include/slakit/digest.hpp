#pragma once

#include <string>
#include <string_view>

namespace slakit {

/// Lowercase hex SHA-256 of `bytes` (64 characters).
std::string sha256_hex(std::string_view bytes);

bool is_sha256_hex(std::string_view s);

}  // namespace slakit
