#pragma once

// Shared Monte Carlo engine: simulates independent rank permutations and
// collects, per replicate, any of the global test statistics and the
// per-decile-cell surface extrema used for barrier calibration. One engine
// pass can serve several consumers so the expensive replicates are never
// repeated.

#include <cstdint>
#include <vector>

#include "qdep/surface.hpp"

namespace qdep {

struct NullRequest {
  int n = 0;
  DyadicGrid grid;
  int runs = 0;
  std::uint64_t master_seed = 0;
  double t_frac = 0.95;      // used only when want_tn
  bool want_tn = false;
  bool want_vn = false;
  bool want_maxbet = false;
  bool want_extrema = false; // per-cell min/max of the unnormalized surface
  int threads = 0;           // 0 = hardware concurrency
};

struct NullCollection {
  // Statistic value of replicate r at index r.
  std::vector<double> tn;
  std::vector<double> vn;
  std::vector<double> maxbet;
  // Cell extrema in replicate-major-within-cell layout:
  // value of cell (k,l) in replicate r at [((k-1)*10 + (l-1)) * runs + r].
  std::vector<double> cell_min;
  std::vector<double> cell_max;
};

NullCollection run_null_replicates(const NullRequest& request);

}  // namespace qdep
