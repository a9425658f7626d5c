#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nanocool {

inline constexpr std::string_view kVersion = "0.1.0";

// Shortest round-trip decimal representation, locale independent.
std::string format_double(double value);

// Writes content to path via a temporary file in the same directory plus
// rename, so readers never observe a partial file. Throws SimError(kIoError).
void atomic_write_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit, returned as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace nanocool
