#pragma once

// Minimal comma-separated table reader/writer. No quoting support: fields
// are numbers or bare identifiers throughout this toolkit.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jjtrench::io {

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws ValidationError when the column is missing.
  std::size_t column(std::string_view name) const;
  /// Parses a whole column as doubles; ParseError names the offending cell.
  std::vector<double> numeric_column(std::size_t index) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest round-trippable text for a double (17 significant digits).
std::string format_double(double value);

/// Strict double parse of a whole token; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view token);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace jjtrench::io
