#include "qdep/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qdep/errors.hpp"
#include "qdep/null_engine.hpp"

namespace qdep {

namespace {

// Standardized extrema of all 100 cells in one pass; count[] receives the
// number of grid points per cell.
void all_cell_extrema(const QSurface& surface, std::array<double, 100>& mins,
                      std::array<double, 100>& maxs, std::array<int, 100>& count) {
  const int d = surface.grid.d;
  std::vector<int> cell_of(static_cast<std::size_t>(d) + 1);
  for (int j = 1; j <= d; ++j) {
    cell_of[static_cast<std::size_t>(j)] = cell_membership(surface.grid.point(j));
  }
  mins.fill(std::numeric_limits<double>::infinity());
  maxs.fill(-std::numeric_limits<double>::infinity());
  count.fill(0);
  for (int j = 1; j <= d; ++j) {
    const int base = (cell_of[static_cast<std::size_t>(j)] - 1) * 10;
    for (int k = 1; k <= d; ++k) {
      const auto c = static_cast<std::size_t>(base + cell_of[static_cast<std::size_t>(k)] - 1);
      const double value = surface.big_q_at(j, k);
      mins[c] = std::min(mins[c], value);
      maxs[c] = std::max(maxs[c], value);
      ++count[c];
    }
  }
}

}  // namespace

int cell_membership(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("cell membership is defined on (0,1) only");
  }
  int k = static_cast<int>(std::ceil(10.0 * p));
  return std::clamp(k, 1, 10);
}

CellClass cell_class(CellFlags flags) {
  if (flags.neg_exceed && flags.pos_exceed) return CellClass::Mixed;
  if (flags.neg_exceed) return CellClass::Blue;
  if (flags.pos_exceed) return CellClass::Pink;
  return CellClass::White;
}

const char* cell_class_name(CellClass c) {
  switch (c) {
    case CellClass::White: return "white";
    case CellClass::Blue: return "blue";
    case CellClass::Pink: return "pink";
    case CellClass::Mixed: return "mixed";
  }
  throw ConfigError("unknown cell class");
}

std::pair<double, double> local_extrema(const QSurface& surface, CellIndex cell) {
  if (cell.k < 1 || cell.k > 10 || cell.l < 1 || cell.l > 10) {
    throw ConfigError("cell index must lie in 1..10");
  }
  std::array<double, 100> mins{}, maxs{};
  std::array<int, 100> count{};
  all_cell_extrema(surface, mins, maxs, count);
  const auto c = static_cast<std::size_t>((cell.k - 1) * 10 + (cell.l - 1));
  if (count[c] == 0) {
    throw ConfigError("cell (" + std::to_string(cell.k) + "," + std::to_string(cell.l) +
                      ") contains no grid point; use d >= 15");
  }
  return {mins[c], maxs[c]};
}

BarrierTable calibrate_barriers(int n, int s, double alpha_side, int runs,
                                std::uint64_t master_seed, int threads) {
  NullRequest request;
  request.n = n;
  request.grid = DyadicGrid::from_depth(s);
  request.runs = runs;
  request.master_seed = master_seed;
  request.want_extrema = true;
  request.threads = threads;

  BarrierMeta meta;
  meta.n = n;
  meta.s = s;
  meta.d = request.grid.d;
  meta.alpha_side = alpha_side;
  meta.runs = runs;
  meta.master_seed = master_seed;
  if (!(alpha_side > 0.0 && alpha_side < 0.5)) {
    throw ConfigError("alpha_side must lie in (0, 0.5)");
  }
  if (runs < 100) throw ConfigError("barrier calibration needs runs >= 100");

  NullCollection collected = run_null_replicates(request);
  return barriers_from_extrema(meta, collected.cell_min, collected.cell_max);
}

BarrierTable barriers_from_extrema(const BarrierMeta& meta,
                                   std::vector<double>& cell_min,
                                   std::vector<double>& cell_max) {
  if (!(meta.alpha_side > 0.0 && meta.alpha_side < 0.5)) {
    throw ConfigError("alpha_side must lie in (0, 0.5)");
  }
  if (meta.runs < 100) throw ConfigError("barrier calibration needs runs >= 100");
  const auto runs_sz = static_cast<std::size_t>(meta.runs);
  if (cell_min.size() != 100 * runs_sz || cell_max.size() != 100 * runs_sz) {
    throw ConfigError("cell extrema size does not match runs");
  }

  auto m_low = static_cast<std::int64_t>(
      std::floor(meta.alpha_side * static_cast<double>(meta.runs)));
  m_low = std::max<std::int64_t>(m_low, 1);
  auto m_high = static_cast<std::int64_t>(
      std::ceil((1.0 - meta.alpha_side) * static_cast<double>(meta.runs)));
  m_high = std::clamp<std::int64_t>(m_high, 1, meta.runs);

  BarrierTable table;
  table.meta = meta;
  for (int k = 1; k <= 10; ++k) {
    for (int l = 1; l <= 10; ++l) {
      const auto c = static_cast<std::size_t>((k - 1) * 10 + (l - 1));
      double* lo_begin = cell_min.data() + c * runs_sz;
      double* hi_begin = cell_max.data() + c * runs_sz;
      std::nth_element(lo_begin, lo_begin + (m_low - 1), lo_begin + runs_sz);
      std::nth_element(hi_begin, hi_begin + (m_high - 1), hi_begin + runs_sz);
      table.lower[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)] =
          lo_begin[m_low - 1];
      table.upper[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)] =
          hi_begin[m_high - 1];
    }
  }
  return table;
}

DependenceDiagram classify(const QSurface& surface, const BarrierTable& barriers) {
  if (barriers.meta.n != surface.n || barriers.meta.d != surface.grid.d) {
    throw ConfigError("barrier table was calibrated for n=" +
                      std::to_string(barriers.meta.n) + ", d=" +
                      std::to_string(barriers.meta.d) + "; surface has n=" +
                      std::to_string(surface.n) + ", d=" +
                      std::to_string(surface.grid.d));
  }
  std::array<double, 100> mins{}, maxs{};
  std::array<int, 100> count{};
  all_cell_extrema(surface, mins, maxs, count);

  DependenceDiagram diagram;
  diagram.meta = barriers.meta;
  for (int k = 1; k <= 10; ++k) {
    for (int l = 1; l <= 10; ++l) {
      const auto c = static_cast<std::size_t>((k - 1) * 10 + (l - 1));
      if (count[c] == 0) {
        throw ConfigError("decile cell without grid points; use d >= 15");
      }
      CellFlags flags;
      flags.neg_exceed =
          mins[c] < surface.scale *
                        barriers.lower[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)];
      flags.pos_exceed =
          maxs[c] > surface.scale *
                        barriers.upper[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)];
      diagram.cells[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l - 1)] = flags;
    }
  }
  return diagram;
}

}  // namespace qdep
