#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace resobeam {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

class CsvWriter {
 public:
  /// Throws std::runtime_error if the file cannot be created.
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace resobeam
