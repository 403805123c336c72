#pragma once

#include <filesystem>
#include <string_view>

namespace grale {

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace grale
