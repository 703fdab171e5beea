#pragma once

// Minimal CSV support for the canonical world schema: comma separated,
// header row, dot decimal, no quoting (codes never contain commas).

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tradeshock::csv {

std::vector<std::string> split(std::string_view line);

/// Full-string numeric parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_number(std::string_view text);

/// Shortest representation that round-trips exactly.
std::string format_number(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

Table parse(std::string_view text);

/// Throws IoError when the file is missing or unreadable.
Table read(const std::filesystem::path& path);

/// Streams rows without materializing the file; `on_row` gets the 1-based
/// line number and fields. Returns the header.
std::vector<std::string> stream(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const std::vector<std::string>&)>& on_row);

std::string read_text(const std::filesystem::path& path);

}  // namespace tradeshock::csv
