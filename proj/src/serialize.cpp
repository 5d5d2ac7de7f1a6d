#include "qdep/serialize.hpp"

#include <algorithm>

#include "qdep/errors.hpp"

namespace qdep {

namespace {

using nlohmann::json;

void require_version(const json& j, const char* where) {
  if (!j.contains("format_version") ||
      j.at("format_version").get<int>() != kFormatVersion) {
    throw InputError(std::string(where) + ": unsupported format version");
  }
}

json meta_to_json(const BarrierMeta& meta) {
  return json{{"n", meta.n},
              {"s", meta.s},
              {"d", meta.d},
              {"alpha_side", meta.alpha_side},
              {"runs", meta.runs},
              {"master_seed", meta.master_seed},
              {"format_version", kFormatVersion}};
}

BarrierMeta meta_from_json(const json& j) {
  require_version(j, "barrier meta");
  BarrierMeta meta;
  meta.n = j.at("n").get<int>();
  meta.s = j.at("s").get<int>();
  meta.d = j.at("d").get<int>();
  meta.alpha_side = j.at("alpha_side").get<double>();
  meta.runs = j.at("runs").get<int>();
  meta.master_seed = j.at("master_seed").get<std::uint64_t>();
  return meta;
}

json grid10_to_json(const std::array<std::array<double, 10>, 10>& grid) {
  json rows = json::array();
  for (const auto& row : grid) {
    json cells = json::array();
    for (double v : row) cells.push_back(v);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::array<std::array<double, 10>, 10> grid10_from_json(const json& j) {
  if (!j.is_array() || j.size() != 10) throw InputError("barrier grid must be 10x10");
  std::array<std::array<double, 10>, 10> grid{};
  for (std::size_t k = 0; k < 10; ++k) {
    const auto& row = j.at(k);
    if (!row.is_array() || row.size() != 10) throw InputError("barrier grid must be 10x10");
    for (std::size_t l = 0; l < 10; ++l) grid[k][l] = row.at(l).get<double>();
  }
  return grid;
}

CellFlags flags_from_name(const std::string& name) {
  if (name == "white") return {false, false};
  if (name == "blue") return {true, false};
  if (name == "pink") return {false, true};
  if (name == "mixed") return {true, true};
  throw InputError("unknown cell class '" + name + "'");
}

}  // namespace

nlohmann::json null_sample_to_json(const NullSample& sample) {
  json config{{"n", sample.config.n},
              {"s", sample.config.s},
              {"t_frac", sample.config.t_frac},
              {"runs", sample.config.runs},
              {"master_seed", sample.config.master_seed},
              {"format_version", kFormatVersion}};
  return json{{"type", "null_sample"},
              {"kind", stat_kind_name(sample.kind)},
              {"config", std::move(config)},
              {"sorted_values", sample.sorted_values}};
}

NullSample null_sample_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "null_sample") {
    throw InputError("not a null-sample document");
  }
  const json& config = j.at("config");
  require_version(config, "null-sample config");
  NullSample sample;
  sample.kind = stat_kind_from_name(j.at("kind").get<std::string>());
  sample.config.n = config.at("n").get<int>();
  sample.config.s = config.at("s").get<int>();
  sample.config.t_frac = config.at("t_frac").get<double>();
  sample.config.runs = config.at("runs").get<int>();
  sample.config.master_seed = config.at("master_seed").get<std::uint64_t>();
  sample.sorted_values = j.at("sorted_values").get<std::vector<double>>();
  if (static_cast<int>(sample.sorted_values.size()) != sample.config.runs) {
    throw InputError("null-sample length does not match its config");
  }
  if (!std::is_sorted(sample.sorted_values.begin(), sample.sorted_values.end())) {
    throw InputError("null-sample values are not sorted");
  }
  return sample;
}

nlohmann::json barrier_table_to_json(const BarrierTable& table) {
  return json{{"type", "barrier_table"},
              {"meta", meta_to_json(table.meta)},
              {"lower", grid10_to_json(table.lower)},
              {"upper", grid10_to_json(table.upper)}};
}

BarrierTable barrier_table_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "barrier_table") {
    throw InputError("not a barrier-table document");
  }
  BarrierTable table;
  table.meta = meta_from_json(j.at("meta"));
  table.lower = grid10_from_json(j.at("lower"));
  table.upper = grid10_from_json(j.at("upper"));
  return table;
}

nlohmann::json diagram_to_json(const DependenceDiagram& diagram) {
  json rows = json::array();
  for (const auto& row : diagram.cells) {
    json cells = json::array();
    for (const CellFlags& flags : row) {
      cells.push_back(cell_class_name(cell_class(flags)));
    }
    rows.push_back(std::move(cells));
  }
  return json{{"type", "dependence_diagram"},
              {"format_version", kFormatVersion},
              {"meta", meta_to_json(diagram.meta)},
              {"cells", std::move(rows)}};
}

DependenceDiagram diagram_from_json(const nlohmann::json& j) {
  if (j.value("type", "") != "dependence_diagram") {
    throw InputError("not a dependence-diagram document");
  }
  require_version(j, "dependence diagram");
  DependenceDiagram diagram;
  diagram.meta = meta_from_json(j.at("meta"));
  const json& rows = j.at("cells");
  if (!rows.is_array() || rows.size() != 10) throw InputError("diagram must be 10x10");
  for (std::size_t k = 0; k < 10; ++k) {
    const auto& row = rows.at(k);
    if (!row.is_array() || row.size() != 10) throw InputError("diagram must be 10x10");
    for (std::size_t l = 0; l < 10; ++l) {
      diagram.cells[k][l] = flags_from_name(row.at(l).get<std::string>());
    }
  }
  return diagram;
}

}  // namespace qdep
