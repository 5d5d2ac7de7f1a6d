#include "qdep/surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdep/errors.hpp"

namespace qdep {

namespace {

void require_interior(double t, const char* name) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError(std::string(name) + " must lie strictly inside (0,1)");
  }
}

constexpr int kMaxDepth = 15;  // d up to 65535; beyond that grids are unusable

}  // namespace

DyadicGrid DyadicGrid::from_depth(int s) {
  if (s < 0 || s > kMaxDepth) {
    throw ConfigError("grid depth must be in [0, " + std::to_string(kMaxDepth) +
                      "], got " + std::to_string(s));
  }
  DyadicGrid g;
  g.s = s;
  g.denom = 1 << (s + 1);
  g.d = g.denom - 1;
  return g;
}

DyadicGrid DyadicGrid::from_points(int d) {
  for (int s = 0; s <= kMaxDepth; ++s) {
    const int candidate = (1 << (s + 1)) - 1;
    if (candidate == d) return from_depth(s);
    if (candidate > d) {
      const int below = (1 << s) - 1;
      throw ConfigError("grid size must be one less than a power of two (1, 3, 7, "
                        "15, 31, 63, 127, ...); got " + std::to_string(d) +
                        " (nearest valid: " + std::to_string(below) + " and " +
                        std::to_string(candidate) + ")");
    }
  }
  throw ConfigError("grid size too large: " + std::to_string(d));
}

DyadicGrid DyadicGrid::largest_not_exceeding(int n) {
  if (n < 1) throw ConfigError("sample size must be positive");
  int s = 0;
  while (s + 1 <= kMaxDepth && (1 << (s + 2)) - 1 <= n) ++s;
  return from_depth(s);
}

std::vector<double> DyadicGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) out[static_cast<std::size_t>(j - 1)] = point(j);
  return out;
}

SurfacePlan::SurfacePlan(int n_in, const DyadicGrid& grid_in) : n(n_in), grid(grid_in) {
  if (n < 2) throw ConfigError("surface plan needs n >= 2");
  const int d = grid.d;
  const int denom = grid.denom;
  knot.resize(static_cast<std::size_t>(d));
  rem.resize(static_cast<std::size_t>(d));
  inv_scale.resize(static_cast<std::size_t>(d));
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int j = 1; j <= d; ++j) {
    const std::int64_t nj = static_cast<std::int64_t>(n) * j;
    knot[static_cast<std::size_t>(j - 1)] = static_cast<int>(nj / denom);
    rem[static_cast<std::size_t>(j - 1)] = static_cast<int>(nj % denom);
    inv_scale[static_cast<std::size_t>(j - 1)] =
        1.0 / (root_n * std::sqrt(static_cast<double>(j) * (denom - j)));
  }
}

void fill_surface_values(const SurfacePlan& plan, const std::int32_t* prefix,
                         std::vector<double>& q_out) {
  const int d = plan.grid.d;
  const int denom = plan.grid.denom;
  const int n = plan.n;
  const std::size_t width = static_cast<std::size_t>(n) + 1;
  q_out.resize(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));

  for (int j = 1; j <= d; ++j) {
    const int a = plan.knot[static_cast<std::size_t>(j - 1)];
    const std::int64_t ru = plan.rem[static_cast<std::size_t>(j - 1)];
    const std::int64_t wu0 = denom - ru;
    const std::int32_t* row0 = prefix + static_cast<std::size_t>(a) * width;
    const std::int32_t* row1 = prefix + static_cast<std::size_t>(std::min(a + 1, n)) * width;
    const double fj = plan.inv_scale[static_cast<std::size_t>(j - 1)];
    double* out_row = q_out.data() + static_cast<std::size_t>(j - 1) * d;

    for (int k = 1; k <= d; ++k) {
      const int b = plan.knot[static_cast<std::size_t>(k - 1)];
      const std::int64_t rv = plan.rem[static_cast<std::size_t>(k - 1)];
      const std::int64_t wv0 = denom - rv;
      // n * denom^2 * (checkerboard value) as an exact integer: bilinear
      // weights times the four surrounding prefix counts.
      std::int64_t num = wu0 * wv0 * row0[b];
      if (ru != 0) num += ru * wv0 * row1[b];
      if (rv != 0) num += wu0 * rv * row0[b + 1];
      if (ru != 0 && rv != 0) num += ru * rv * row1[b + 1];
      // Subtract n * denom^2 * uv, still exact.
      num -= static_cast<std::int64_t>(n) * j * k;
      // The inverse scales are multiplied together first so that transposed
      // index pairs round identically (float multiplication is commutative).
      const double w = fj * plan.inv_scale[static_cast<std::size_t>(k - 1)];
      double value = static_cast<double>(num) * w;
      if (value > 1.0) value = 1.0;
      if (value < -1.0) value = -1.0;
      out_row[static_cast<std::size_t>(k - 1)] = value;
    }
  }
}

double q_bar(const CheckerboardCopula& cop, double u, double v) {
  require_interior(u, "u");
  require_interior(v, "v");
  const double c = checkerboard_copula(cop, u, v);
  const double value = (c - u * v) / std::sqrt(u * v * (1.0 - u) * (1.0 - v));
  return std::clamp(value, -1.0, 1.0);
}

QSurface q_surface(const CheckerboardCopula& cop, const DyadicGrid& grid) {
  if (cop.m() != 2) throw ConfigError("q_surface needs a bivariate copula");
  QSurface out;
  out.grid = grid;
  out.n = cop.n();
  out.scale = std::sqrt(static_cast<double>(cop.n()));
  const SurfacePlan plan(cop.n(), grid);
  fill_surface_values(plan, cop.prefix_data(), out.q);
  return out;
}

double q_exact(const CopulaFn& copula, double u, double v) {
  require_interior(u, "u");
  require_interior(v, "v");
  return (copula(u, v) - u * v) / std::sqrt(u * v * (1.0 - u) * (1.0 - v));
}

double q_conditional(const CopulaFn& copula, double u, double v) {
  require_interior(u, "u");
  require_interior(v, "v");
  const double c = copula(u, v);
  const double upper_tail_given_high = (1.0 - u - v + c) / (1.0 - u);
  const double upper_tail_given_low = (u - c) / u;
  return std::sqrt(u * (1.0 - u) / (v * (1.0 - v))) *
         (upper_tail_given_high - upper_tail_given_low);
}

double sigma_m(const std::vector<double>& t) {
  const std::size_t m = t.size();
  if (m < 2) throw ConfigError("sigma_m needs at least two coordinates");
  int ones = 0;
  for (double tk : t) {
    if (!(tk >= 0.0 && tk <= 1.0)) throw DomainError("t outside [0,1]");
    if (tk == 1.0) ++ones;
  }
  if (ones > static_cast<int>(m) - 2) {
    throw DomainError("degenerate point: more than m-2 coordinates equal 1");
  }
  double prod = 1.0;
  for (double tk : t) prod *= tk;
  double leave_one_out_sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double p = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != k) p *= t[j];
    }
    leave_one_out_sum += p;
  }
  const double variance =
      prod * (1.0 + (static_cast<double>(m) - 1.0) * prod - leave_one_out_sum);
  if (variance < 0.0) {
    throw DomainError("degenerate point: null variance vanishes");
  }
  return std::sqrt(variance);
}

double q_bar_m(const CheckerboardCopula& cop, const std::vector<double>& t) {
  if (t.size() != static_cast<std::size_t>(cop.m())) {
    throw ConfigError("evaluation point dimension does not match copula");
  }
  const double sigma = sigma_m(t);
  if (!(sigma > 0.0)) {
    throw DomainError("null standard deviation vanishes at this point");
  }
  double prod = 1.0;
  for (double tk : t) prod *= tk;
  return (multilinear_copula(cop, t) - prod) / sigma;
}

CopulaFn independence_copula() {
  return [](double u, double v) { return u * v; };
}

CopulaFn frechet_mixture_copula(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("mixture weight must lie in [0,1]");
  }
  return [theta](double u, double v) {
    return theta * std::min(u, v) + (1.0 - theta) * std::max(u + v - 1.0, 0.0);
  };
}

}  // namespace qdep
