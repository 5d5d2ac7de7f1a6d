#pragma once

// Dependence diagrams: the 10x10 decile-cell summary of the standardized
// surface, Monte Carlo calibrated per-cell barriers, and the cell
// classification (white / blue / pink / mixed).

#include <array>
#include <cstdint>
#include <utility>

#include "qdep/surface.hpp"

namespace qdep {

// Decile cell of p in (0,1): 1 for (0, 0.1], 2 for (0.1, 0.2], ..., 10 for
// (0.9, 1). Throws DomainError outside the open unit interval.
int cell_membership(double p);

struct CellIndex {
  int k = 1;  // row, first-axis decile
  int l = 1;  // column, second-axis decile
};

struct BarrierMeta {
  int n = 0;
  int s = 0;
  int d = 0;
  double alpha_side = 0.05;
  int runs = 0;
  std::uint64_t master_seed = 0;
};

// Per-cell barriers on the unnormalized scale (multiply by sqrt(n) for the
// standardized scale). lower[k-1][l-1] is the alpha_side quantile of the null
// cell minimum, upper the (1 - alpha_side) quantile of the null cell maximum.
struct BarrierTable {
  BarrierMeta meta;
  std::array<std::array<double, 10>, 10> lower{};
  std::array<std::array<double, 10>, 10> upper{};
};

struct CellFlags {
  bool neg_exceed = false;  // observed cell minimum fell below the lower barrier
  bool pos_exceed = false;  // observed cell maximum rose above the upper barrier
};

enum class CellClass { White, Blue, Pink, Mixed };

CellClass cell_class(CellFlags flags);
const char* cell_class_name(CellClass c);

struct DependenceDiagram {
  BarrierMeta meta;
  std::array<std::array<CellFlags, 10>, 10> cells{};
};

// Minimum and maximum of the standardized surface over the grid points inside
// cell (k,l). Throws ConfigError when the cell contains no grid point, which
// happens for d < 15.
std::pair<double, double> local_extrema(const QSurface& surface, CellIndex cell);

// Distribution-free calibration under independence: runs replicates of
// independent rank permutations of size n on the depth-s grid. The lower
// barrier of a cell is the max(1, floor(alpha_side*runs))-th smallest null
// minimum, the upper barrier the ceil((1-alpha_side)*runs)-th smallest null
// maximum. Deterministic in (n, s, alpha_side, runs, master_seed).
BarrierTable calibrate_barriers(int n, int s, double alpha_side, int runs,
                                std::uint64_t master_seed, int threads = 0);

// Assembles a table from already-simulated per-cell extrema, laid out as
// value of cell (k,l) in replicate r at [((k-1)*10 + (l-1)) * meta.runs + r].
// The slabs are partially reordered in place. Lets one Monte Carlo pass feed
// both the barrier table and the null samples of the global statistics.
BarrierTable barriers_from_extrema(const BarrierMeta& meta,
                                   std::vector<double>& cell_min,
                                   std::vector<double>& cell_max);

// Flags every cell whose observed extremum strictly crosses its barrier.
// Throws ConfigError when the barrier table was calibrated for a different
// (n, s) than the surface.
DependenceDiagram classify(const QSurface& surface, const BarrierTable& barriers);

}  // namespace qdep
