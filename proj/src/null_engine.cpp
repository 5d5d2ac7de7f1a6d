#include "qdep/null_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>

#include "qdep/diagram.hpp"
#include "qdep/errors.hpp"
#include "qdep/independence_test.hpp"
#include "qdep/random.hpp"

namespace qdep {

namespace {

struct Workspace {
  std::vector<int> perm_x, perm_y, y_of_x;
  std::vector<std::int32_t> prefix;  // (n+1)^2, row 0 stays zero
  std::vector<double> q;
  std::vector<double> scratch;

  explicit Workspace(int n) : y_of_x(static_cast<std::size_t>(n) + 1) {
    const std::size_t width = static_cast<std::size_t>(n) + 1;
    prefix.assign(width * width, 0);
  }
};

// Rank prefix-count table of the composed permutation: one incremental pass,
// prefix[r][s] = #{i <= r : y_of_x[i] <= s}.
void build_prefix(int n, const std::vector<int>& y_of_x, std::vector<std::int32_t>& prefix) {
  const std::size_t width = static_cast<std::size_t>(n) + 1;
  const std::int32_t* prev = prefix.data();
  for (int r = 1; r <= n; ++r) {
    std::int32_t* cur = prefix.data() + static_cast<std::size_t>(r) * width;
    const int yr = y_of_x[static_cast<std::size_t>(r)];
    cur[0] = 0;
    for (int s = 1; s <= n; ++s) {
      cur[s] = prev[s] + (s >= yr ? 1 : 0);
    }
    prev = cur;
  }
}

}  // namespace

NullCollection run_null_replicates(const NullRequest& request) {
  const int n = request.n;
  const int runs = request.runs;
  if (n < 2) throw ConfigError("null replicates need n >= 2");
  if (runs < 1) throw ConfigError("null replicates need runs >= 1");
  if (request.want_tn && !(request.t_frac > 0.0 && request.t_frac <= 1.0)) {
    throw ConfigError("t_frac must lie in (0, 1]");
  }

  const SurfacePlan plan(n, request.grid);
  const int d = request.grid.d;
  const double scale = std::sqrt(static_cast<double>(n));

  // Decile cell of each grid index, for extrema collection.
  std::vector<std::int8_t> cell_of(static_cast<std::size_t>(d) + 1, 0);
  if (request.want_extrema) {
    std::array<int, 100> occupancy{};
    for (int j = 1; j <= d; ++j) {
      cell_of[static_cast<std::size_t>(j)] =
          static_cast<std::int8_t>(cell_membership(request.grid.point(j)));
    }
    for (int j = 1; j <= d; ++j) {
      for (int k = 1; k <= d; ++k) {
        ++occupancy[static_cast<std::size_t>((cell_of[static_cast<std::size_t>(j)] - 1) * 10 +
                                             cell_of[static_cast<std::size_t>(k)] - 1)];
      }
    }
    for (int c = 0; c < 100; ++c) {
      if (occupancy[static_cast<std::size_t>(c)] == 0) {
        throw ConfigError("decile cell (" + std::to_string(c / 10 + 1) + "," +
                          std::to_string(c % 10 + 1) +
                          ") contains no grid point; use d >= 15");
      }
    }
  }

  // Exact Rademacher signs per rank via integer division of the midpoint
  // 2^j * (r - 0.5) / n.
  std::vector<std::int8_t> half_sign(static_cast<std::size_t>(n) + 1, 1);
  std::vector<std::int8_t> quarter_sign(static_cast<std::size_t>(n) + 1, 1);
  if (request.want_maxbet) {
    for (int r = 1; r <= n; ++r) {
      half_sign[static_cast<std::size_t>(r)] =
          static_cast<std::int8_t>(((2 * r - 1) / n) % 2 == 0 ? 1 : -1);
      quarter_sign[static_cast<std::size_t>(r)] =
          static_cast<std::int8_t>(((4 * r - 2) / n) % 2 == 0 ? 1 : -1);
    }
  }

  NullCollection out;
  const auto runs_sz = static_cast<std::size_t>(runs);
  if (request.want_tn) out.tn.resize(runs_sz);
  if (request.want_vn) out.vn.resize(runs_sz);
  if (request.want_maxbet) out.maxbet.resize(runs_sz);
  if (request.want_extrema) {
    out.cell_min.resize(100 * runs_sz);
    out.cell_max.resize(100 * runs_sz);
  }

  const auto worker = [&](int begin, int end) {
    Workspace ws(n);
    std::array<double, 100> cmin{}, cmax{};
    for (int r = begin; r < end; ++r) {
      RandomStream stream = RandomStream::substream(
          request.master_seed, StreamDomain::NullReplicate, static_cast<std::uint64_t>(r));
      random_permutation(n, stream, ws.perm_x);
      random_permutation(n, stream, ws.perm_y);
      for (int i = 0; i < n; ++i) {
        ws.y_of_x[static_cast<std::size_t>(ws.perm_x[static_cast<std::size_t>(i)])] =
            ws.perm_y[static_cast<std::size_t>(i)];
      }
      build_prefix(n, ws.y_of_x, ws.prefix);
      fill_surface_values(plan, ws.prefix.data(), ws.q);

      if (request.want_tn) {
        out.tn[static_cast<std::size_t>(r)] =
            t_stat_from_values(ws.q, scale, request.t_frac, ws.scratch);
      }
      if (request.want_vn) {
        out.vn[static_cast<std::size_t>(r)] = v_stat_from_values(ws.q, scale);
      }
      if (request.want_maxbet) {
        int s_acc[3][3] = {};
        for (int i = 1; i <= n; ++i) {
          const int yr = ws.y_of_x[static_cast<std::size_t>(i)];
          const int x1 = half_sign[static_cast<std::size_t>(i)];
          const int x2 = quarter_sign[static_cast<std::size_t>(i)];
          const int y1 = half_sign[static_cast<std::size_t>(yr)];
          const int y2 = quarter_sign[static_cast<std::size_t>(yr)];
          const int xs[3] = {x1, x2, x1 * x2};
          const int ys[3] = {y1, y2, y1 * y2};
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) s_acc[a][b] += xs[a] * ys[b];
          }
        }
        int max_abs = 0;
        for (auto& row : s_acc) {
          for (int v : row) max_abs = std::max(max_abs, std::abs(v));
        }
        out.maxbet[static_cast<std::size_t>(r)] =
            static_cast<double>(max_abs) / static_cast<double>(n);
      }
      if (request.want_extrema) {
        cmin.fill(std::numeric_limits<double>::infinity());
        cmax.fill(-std::numeric_limits<double>::infinity());
        for (int j = 1; j <= d; ++j) {
          const int base = (cell_of[static_cast<std::size_t>(j)] - 1) * 10;
          const double* row = ws.q.data() + static_cast<std::size_t>(j - 1) * d;
          for (int k = 1; k <= d; ++k) {
            const auto c =
                static_cast<std::size_t>(base + cell_of[static_cast<std::size_t>(k)] - 1);
            const double value = row[static_cast<std::size_t>(k - 1)];
            cmin[c] = std::min(cmin[c], value);
            cmax[c] = std::max(cmax[c], value);
          }
        }
        for (std::size_t c = 0; c < 100; ++c) {
          out.cell_min[c * runs_sz + static_cast<std::size_t>(r)] = cmin[c];
          out.cell_max[c * runs_sz + static_cast<std::size_t>(r)] = cmax[c];
        }
      }
    }
  };

  int threads = request.threads > 0
                    ? request.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, runs);
  if (threads <= 1) {
    worker(0, runs);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const int begin = static_cast<int>(static_cast<std::int64_t>(runs) * t / threads);
      const int end = static_cast<int>(static_cast<std::int64_t>(runs) * (t + 1) / threads);
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace qdep
