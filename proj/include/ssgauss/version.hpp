#pragma once

#include <cstdint>
#include <string_view>

namespace ssgauss {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// 64-bit FNV-1a hash, used to tag outputs with the configuration they came from.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ssgauss
