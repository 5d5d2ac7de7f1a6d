#include "qdep/bet.hpp"

#include <cmath>
#include <cstdlib>

#include "qdep/errors.hpp"

namespace qdep {

int walsh(int index, double s) {
  if (index < 0 || index > 3) throw ConfigError("walsh index must lie in 0..3");
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("walsh argument must lie in [0,1)");
  if (index == 0) return 1;
  const int r1 = static_cast<int>(std::floor(2.0 * s)) % 2 == 0 ? 1 : -1;
  if (index == 1) return r1;
  const int r2 = static_cast<int>(std::floor(4.0 * s)) % 2 == 0 ? 1 : -1;
  return index == 2 ? r2 : r1 * r2;
}

SymmetryStats symmetry_statistics(const PseudoSample& pseudo) {
  if (pseudo.dim() != 2) {
    throw ConfigError("symmetry statistics need exactly two rank columns");
  }
  const int n = pseudo.n;
  if (n < 1) throw InputError("empty pseudo-sample");

  SymmetryStats stats;
  stats.n = n;
  for (int obs = 0; obs < n; ++obs) {
    const int r = pseudo.ranks[0][static_cast<std::size_t>(obs)];
    const int s = pseudo.ranks[1][static_cast<std::size_t>(obs)];
    // Sign of the k-th Rademacher function at the midpoint (rank - 0.5)/n is
    // determined by the integer quotient (2^k * (2*rank - 1)) / (2n); with the
    // common factor cancelled this is (2*rank - 1)/n and (4*rank - 2)/n.
    const int x1 = ((2 * r - 1) / n) % 2 == 0 ? 1 : -1;
    const int x2 = ((4 * r - 2) / n) % 2 == 0 ? 1 : -1;
    const int y1 = ((2 * s - 1) / n) % 2 == 0 ? 1 : -1;
    const int y2 = ((4 * s - 2) / n) % 2 == 0 ? 1 : -1;
    const int xs[3] = {x1, x2, x1 * x2};
    const int ys[3] = {y1, y2, y1 * y2};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        stats.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += xs[a] * ys[b];
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      stats.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          static_cast<double>(stats.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) /
          static_cast<double>(n);
    }
  }
  return stats;
}

double max_bet_statistic(const SymmetryStats& stats) {
  long max_abs = 0;
  for (const auto& row : stats.s) {
    for (long v : row) max_abs = std::max(max_abs, std::labs(v));
  }
  return static_cast<double>(max_abs) / static_cast<double>(stats.n);
}

std::string interaction_label(int i, int j) {
  const auto code = [](int idx) -> const char* {
    switch (idx) {
      case 1: return "10";
      case 2: return "01";
      case 3: return "11";
    }
    throw ConfigError("interaction index must lie in 1..3");
  };
  return std::string("S_(") + code(i) + "," + code(j) + ")";
}

PatternSelection max_bet_select(const SymmetryStats& stats) {
  PatternSelection sel;
  long best = -1;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const long v =
          std::labs(stats.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      if (v > best) {
        best = v;
        sel.i = a + 1;
        sel.j = b + 1;
        sel.s_value = stats.s[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
    }
  }
  sel.sign = sel.s_value < 0 ? -1 : 1;
  sel.statistic = static_cast<double>(best) / static_cast<double>(stats.n);
  sel.label = interaction_label(sel.i, sel.j);
  return sel;
}

PatternSelection max_bet_select(const SymmetryStats& stats, const NullSample& null) {
  if (null.kind != StatKind::MaxBet) {
    throw ConfigError("pattern selection needs a max-statistic null sample");
  }
  if (null.config.n != stats.n) {
    throw ConfigError("null sample was calibrated for n=" +
                      std::to_string(null.config.n) + ", data has n=" +
                      std::to_string(stats.n));
  }
  PatternSelection sel = max_bet_select(stats);
  sel.p = p_value(sel.statistic, null);
  return sel;
}

}  // namespace qdep
