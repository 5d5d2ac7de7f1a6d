#pragma once

// Depth-2 binary expansion symmetry statistics: Rademacher-Walsh interactions
// of the two rank columns evaluated at rank midpoints, the max-statistic over
// the 3x3 interaction table, and the selection of the strongest pattern.

#include <array>
#include <string>

#include "qdep/independence_test.hpp"
#include "qdep/ranks.hpp"

namespace qdep {

// Rademacher-Walsh system on [0,1): index 0 is the constant 1, index 1 flips
// sign with the first binary digit, index 2 with the second, index 3 is the
// product of the two.
int walsh(int index, double s);

struct SymmetryStats {
  int n = 0;
  // Integer interaction sums over observations: s[i-1][j-1] is the sum of
  // walsh(i, (R-0.5)/n) * walsh(j, (S-0.5)/n).
  std::array<std::array<long, 3>, 3> s{};
  // Normalized statistics w = s / n.
  std::array<std::array<double, 3>, 3> w{};
};

// Interaction table of a bivariate pseudo-sample. Signs are computed with
// exact integer arithmetic, so the sums are free of rounding.
SymmetryStats symmetry_statistics(const PseudoSample& pseudo);

// max_{i,j} |w[i][j]|.
double max_bet_statistic(const SymmetryStats& stats);

struct PatternSelection {
  int i = 1, j = 1;        // selected interaction, first maximum in row-major order
  int sign = 1;            // sign of the selected integer sum (+1 when zero)
  long s_value = 0;        // selected integer sum
  double statistic = 0.0;  // max |w|
  double p = 1.0;          // Monte Carlo p-value when a null sample is supplied
  std::string label;       // binary-index label such as "S_(10,01)"
};

PatternSelection max_bet_select(const SymmetryStats& stats);
// Adds the Monte Carlo p-value; the null sample must hold the max statistic
// for the same n.
PatternSelection max_bet_select(const SymmetryStats& stats, const NullSample& null);

// Label of interaction (i,j): each index is written as the two binary digits
// it activates, 1 -> "10", 2 -> "01", 3 -> "11".
std::string interaction_label(int i, int j);

}  // namespace qdep
