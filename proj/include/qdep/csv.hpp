#pragma once

// CSV ingestion for observation data and the surface export format: a header
// row of grid points followed by d rows of values, 17-significant-digit
// decimals so matrices round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdep/ranks.hpp"
#include "qdep/surface.hpp"

namespace qdep {

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header row
  std::vector<std::vector<double>> columns;
  bool had_header = false;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t cols() const { return columns.size(); }
};

// Comma-separated UTF-8 numeric table with an optional single header row,
// auto-detected: a first row with any non-numeric field is the header.
// Blank lines are skipped; a UTF-8 BOM is stripped. Throws InputError on
// unreadable files, ragged rows, or non-numeric data cells.
CsvTable read_numeric_csv(const std::filesystem::path& path);
CsvTable parse_numeric_csv(const std::string& text, const std::string& origin);

// Select columns (1-based indices) into a Sample; labels are carried over
// when the table has a header. Throws InputError for out-of-range indices.
Sample sample_from_table(const CsvTable& table, const std::vector<int>& columns);

// Surface export: first row = the d grid points, then d rows of values,
// row j holding q(p_j, p_k) for k = 1..d.
std::string qsurface_csv_text(const QSurface& surface);

struct ParsedQSurface {
  std::vector<double> grid_points;
  std::vector<std::vector<double>> values;  // values[j-1][k-1]
};
ParsedQSurface parse_qsurface_csv(const std::string& text);

}  // namespace qdep
