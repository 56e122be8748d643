#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace marl_lob::io {

/// Shortest round-trip decimal form; identical on every conforming platform.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

/// Writes through a sibling temp file and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace marl_lob::io
