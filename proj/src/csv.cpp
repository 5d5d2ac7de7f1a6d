#include "qdep/csv.hpp"

#include <fstream>
#include <sstream>

#include "qdep/errors.hpp"
#include "qdep/text_util.hpp"

namespace qdep {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view raw = comma == std::string_view::npos
                                     ? line.substr(start)
                                     : line.substr(start, comma - start);
    fields.emplace_back(trim_view(raw));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("failed reading '" + path.string() + "'");
  return std::move(buf).str();
}

}  // namespace

CsvTable parse_numeric_csv(const std::string& text, const std::string& origin) {
  std::string_view body(text);
  if (body.size() >= 3 && body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3);

  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_first_row = false;
  std::vector<std::vector<std::string>> pending_first;  // defer until type known

  while (pos <= body.size()) {
    const std::size_t eol = body.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? body.substr(pos)
                                : body.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? body.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim_view(line).empty()) continue;

    const std::vector<std::string> fields = split_fields(line);
    if (!saw_first_row) {
      saw_first_row = true;
      bool all_numeric = true;
      for (const auto& f : fields) {
        if (!parse_double(f)) {
          all_numeric = false;
          break;
        }
      }
      if (all_numeric) {
        table.columns.assign(fields.size(), {});
        for (std::size_t c = 0; c < fields.size(); ++c) {
          table.columns[c].push_back(*parse_double(fields[c]));
        }
      } else {
        table.had_header = true;
        table.header = fields;
        table.columns.assign(fields.size(), {});
      }
      continue;
    }

    if (fields.size() != table.columns.size()) {
      throw InputError(origin + " line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = parse_double(fields[c]);
      if (!value) {
        throw InputError(origin + " line " + std::to_string(line_no) + ", field " +
                         std::to_string(c + 1) + ": '" + fields[c] +
                         "' is not numeric");
      }
      table.columns[c].push_back(*value);
    }
  }

  if (!saw_first_row) throw InputError(origin + " is empty");
  if (table.rows() == 0) throw InputError(origin + " has no data rows");
  return table;
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  return parse_numeric_csv(read_file_text(path), path.string());
}

Sample sample_from_table(const CsvTable& table, const std::vector<int>& columns) {
  if (table.cols() < 2) {
    throw InputError("need at least 2 columns, file has " + std::to_string(table.cols()));
  }
  Sample sample;
  for (int c : columns) {
    if (c < 1 || static_cast<std::size_t>(c) > table.cols()) {
      throw InputError("column index " + std::to_string(c) + " out of range (file has " +
                       std::to_string(table.cols()) + " columns)");
    }
    sample.columns.push_back(table.columns[static_cast<std::size_t>(c - 1)]);
    if (table.had_header) {
      sample.labels.push_back(table.header[static_cast<std::size_t>(c - 1)]);
    }
  }
  validate_sample(sample);
  return sample;
}

std::string qsurface_csv_text(const QSurface& surface) {
  const int d = surface.grid.d;
  std::string out;
  out.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d) * 20);
  for (int j = 1; j <= d; ++j) {
    if (j > 1) out.push_back(',');
    out += format_double(surface.grid.point(j));
  }
  out.push_back('\n');
  for (int j = 1; j <= d; ++j) {
    for (int k = 1; k <= d; ++k) {
      if (k > 1) out.push_back(',');
      out += format_double(surface.q_at(j, k));
    }
    out.push_back('\n');
  }
  return out;
}

ParsedQSurface parse_qsurface_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ParsedQSurface out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_view(line).empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_fields(line)) {
      const auto value = parse_double(field);
      if (!value) {
        throw InputError("surface CSV line " + std::to_string(line_no) + ": '" +
                         field + "' is not numeric");
      }
      row.push_back(*value);
    }
    if (out.grid_points.empty()) {
      out.grid_points = std::move(row);
    } else {
      if (row.size() != out.grid_points.size()) {
        throw InputError("surface CSV line " + std::to_string(line_no) +
                         ": row width does not match grid size");
      }
      out.values.push_back(std::move(row));
    }
  }
  if (out.grid_points.empty() || out.values.size() != out.grid_points.size()) {
    throw InputError("surface CSV must hold one grid row plus d value rows");
  }
  return out;
}

}  // namespace qdep
