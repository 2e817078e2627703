#pragma once

#include <filesystem>
#include <string>

namespace stylus {

#include <istream>

std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// std::getline that also strips a trailing CR, so CRLF files parse cleanly.
inline bool get_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace stylus
