#pragma once

// The quantile dependence function: pointwise estimates from the checkerboard
// copula, fast evaluation over dyadic grids, exact values for reference
// copulas, and the multivariate normalization.

#include <cstdint>
#include <functional>
#include <vector>

#include "qdep/copula.hpp"

namespace qdep {

// Dyadic inspection grid: points j / 2^(s+1) for j = 1..d with d = 2^(s+1)-1.
struct DyadicGrid {
  int s = 0;      // depth
  int d = 1;      // points per axis, 2^(s+1) - 1
  int denom = 2;  // 2^(s+1)

  static DyadicGrid from_depth(int s);
  // Accepts only d of the form 2^(s+1)-1; the error message names the nearest
  // admissible sizes.
  static DyadicGrid from_points(int d);
  // Largest admissible d not exceeding n (the default grid for a sample).
  static DyadicGrid largest_not_exceeding(int n);

  double point(int j) const { return static_cast<double>(j) / denom; }
  std::vector<double> points() const;
};

// Normalized dependence estimates over a dyadic grid. q holds the
// unnormalized-scale values; multiply by scale = sqrt(n) for the
// root-n-standardized process.
struct QSurface {
  DyadicGrid grid;
  int n = 0;
  double scale = 0.0;
  std::vector<double> q;  // row-major d*d, (j,k) at [(j-1)*d + (k-1)]

  double q_at(int j, int k) const {
    return q[static_cast<std::size_t>(j - 1) * grid.d + static_cast<std::size_t>(k - 1)];
  }
  double big_q_at(int j, int k) const { return scale * q_at(j, k); }
};

// Precomputed integer decomposition of all grid points against a sample size:
// for u = j/denom, n*u = knot + rem/denom exactly. Lets the surface be filled
// with pure integer arithmetic from the rank prefix table, so results are
// bit-identical regardless of evaluation order or thread count.
struct SurfacePlan {
  int n = 0;
  DyadicGrid grid;
  std::vector<int> knot;         // knot[j-1] = floor(n*j / denom)
  std::vector<int> rem;          // rem[j-1]  = n*j - knot*denom
  std::vector<double> inv_scale; // 1 / (sqrt(n) * sqrt(j*(denom-j)))

  SurfacePlan() = default;
  SurfacePlan(int n, const DyadicGrid& grid);
};

// Fill q_out (resized to d*d) from a prefix-count table laid out as in
// CheckerboardCopula::prefix_data(). Values are clamped to [-1, 1].
void fill_surface_values(const SurfacePlan& plan, const std::int32_t* prefix,
                         std::vector<double>& q_out);

// Pointwise estimate (C_n^checkerboard(u,v) - uv) / sqrt(uv(1-u)(1-v)) for
// (u,v) strictly inside the unit square.
double q_bar(const CheckerboardCopula& cop, double u, double v);

// Whole-grid evaluation; agrees with q_bar at every grid point up to
// floating-point rounding but runs in O(n^2 + d^2) total instead of per
// point, with integer numerators so transposing the ranks transposes the
// surface bit for bit.
QSurface q_surface(const CheckerboardCopula& cop, const DyadicGrid& grid);

using CopulaFn = std::function<double(double, double)>;

// Population quantile dependence of a copula given as a function.
double q_exact(const CopulaFn& copula, double u, double v);

// The same quantity computed through tail conditional probabilities:
// sqrt(u(1-u)/(v(1-v))) * [P(Y>y_v | X>x_u) - P(Y>y_v | X<=x_u)].
double q_conditional(const CopulaFn& copula, double u, double v);

// Null standard deviation of the multivariate checkerboard estimate at t:
// sigma^2 = (prod t_k) (1 + (m-1) prod t_k - sum_k prod_{j != k} t_j).
// Requires at most m-2 coordinates equal to 1.
double sigma_m(const std::vector<double>& t);

// Multivariate normalized estimate (C_n^multilinear(t) - prod t_k) / sigma_m(t).
double q_bar_m(const CheckerboardCopula& cop, const std::vector<double>& t);

// Reference copulas.
CopulaFn independence_copula();
// Mixture theta * min(u,v) + (1-theta) * max(u+v-1, 0) of the extreme
// positive and negative dependence copulas, theta in [0,1].
CopulaFn frechet_mixture_copula(double theta);

}  // namespace qdep
