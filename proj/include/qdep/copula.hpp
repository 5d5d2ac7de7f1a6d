#pragma once

// Empirical and checkerboard copulas built from rank data, the exact null
// moments of the checkerboard estimate, and its multivariate extension.

#include <cstdint>
#include <vector>

#include "qdep/ranks.hpp"

namespace qdep {

// Rank-derived copula estimates. For two columns a full prefix-count table is
// materialized so every knot lookup is O(1); higher dimensions count directly.
class CheckerboardCopula {
 public:
  static CheckerboardCopula from_pseudo(const PseudoSample& pseudo);
  // ranks: one permutation of 1..n per column, at least two columns.
  static CheckerboardCopula from_ranks(std::vector<std::vector<int>> ranks);

  int n() const { return n_; }
  int m() const { return static_cast<int>(ranks_.size()); }

  // Number of observations with first rank <= j and second rank <= k,
  // for 0 <= j,k <= n. Only available when m() == 2.
  std::int32_t prefix_count(int j, int k) const {
    return prefix_[static_cast<std::size_t>(j) * (static_cast<std::size_t>(n_) + 1) +
                   static_cast<std::size_t>(k)];
  }

  // Number of observations with rank <= bound[k] in every column; bounds are
  // clamped to [0, n]. Works for any m() >= 2.
  int knot_count(const std::vector<int>& bound) const;

  // Raw prefix table, (n+1)x(n+1) row-major. Only available when m() == 2.
  const std::int32_t* prefix_data() const { return prefix_.data(); }

  const std::vector<int>& rank_column(std::size_t k) const { return ranks_[k]; }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> ranks_;
  std::vector<std::int32_t> prefix_;  // (n+1)^2 row-major, m == 2 only
};

// Empirical copula C_n(u,v): fraction of observations with R_i/n <= u and
// S_i/n <= v. Step function; domain [0,1]^2.
double empirical_copula(const CheckerboardCopula& cop, double u, double v);

// Checkerboard copula: bilinear interpolation of the empirical copula between
// the four lattice knots surrounding (u,v). Domain [0,1]^2.
double checkerboard_copula(const CheckerboardCopula& cop, double u, double v);

// Multivariate checkerboard copula at t in [0,1]^m: average over observations
// of prod_k [ 1(R^k_i <= floor(n t_k)) + frac(n t_k) 1(R^k_i = floor(n t_k)+1) ].
double multilinear_copula(const CheckerboardCopula& cop, const std::vector<double>& t);

// Exact mean and variance of the checkerboard estimate at (u,v) when ranks are
// independent uniform permutations: mean = uv and
// variance = (n-1)^{-1} {u(1-u) - eps_n(u)} {v(1-v) - eps_n(v)},
// where eps_n(t) = n^{-1} frac(nt)(1 - frac(nt)).
struct NullMoments {
  double mean = 0.0;
  double variance = 0.0;
};
NullMoments null_moments(int n, double u, double v);

}  // namespace qdep
