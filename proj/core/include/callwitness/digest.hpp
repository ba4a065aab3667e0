#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace callwitness {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a; stable across platforms, used to derive per-stratum seeds.
std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace callwitness
