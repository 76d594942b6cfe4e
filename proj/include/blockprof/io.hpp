#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace blockprof {

std::string read_text_file(const std::filesystem::path& path);
/// Writes `content` (creating parent directories) and returns its SHA-256.
std::string write_text_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

/// Shortest text that round-trips the double; integral values have no ".0".
std::string format_number(double value);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);
std::string csv_row(const std::vector<std::string>& fields);

/// Splits on `sep`, trimming surrounding blanks.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

}  // namespace blockprof
