#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qlab::harness {

using Metadata = std::vector<std::pair<std::string, std::string>>;
using Cell = std::variant<double, long, std::string>;

// Writes "# key: value" metadata lines, a header row and data rows. Doubles
// use 15 significant digits so reruns produce identical bodies. The only
// line allowed to differ between runs is "# generated:".
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Metadata& meta, std::vector<std::string> columns);

  void row(const std::vector<Cell>& cells);
  std::size_t rows() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream os_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

std::string format_cell(const Cell& c);

// Reads the data rows of a file written by CsvWriter (comments skipped,
// header returned separately). Used by tests and the acceptance runner.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvData read_csv(const std::filesystem::path& path);

}  // namespace qlab::harness
