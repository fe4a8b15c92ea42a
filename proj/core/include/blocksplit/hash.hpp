#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace blocksplit {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

/// 64-bit FNV-1a; `state` chains several inputs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = kFnvOffset);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

} // namespace blocksplit
