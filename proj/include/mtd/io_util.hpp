#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mtd {

// Writes body to a sibling temp file and renames it over path, so readers
// never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view body);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace mtd
