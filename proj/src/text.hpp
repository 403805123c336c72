#pragma once

// Small text and file helpers shared by the readers and writers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grale::detail {

std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);

/// One CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_field(std::string_view value);

std::string read_file(const std::filesystem::path& path);
/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string format_fixed(double value, int decimals);
/// Shortest round-trippable rendering.
std::string format_exact(double value);

}  // namespace grale::detail
