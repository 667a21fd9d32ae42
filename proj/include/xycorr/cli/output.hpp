#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace xycorr::cli {

/// Shortest "%.10g" rendering; what the CSV writers emit for every real.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  [[nodiscard]] std::size_t column(const std::string& name) const;
};

std::string to_csv_text(const CsvTable& table);
/// Parses comma-separated text with a header line. Fields never contain
/// commas or quotes in this tool's output.
CsvTable parse_csv_text(const std::string& text);

/// Throws std::runtime_error naming the path when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace xycorr::cli
