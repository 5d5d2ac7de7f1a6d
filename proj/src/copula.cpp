#include "qdep/copula.hpp"

#include <algorithm>
#include <cmath>

#include "qdep/errors.hpp"

namespace qdep {

namespace {

void require_unit_interval(double t, const char* name) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(name) + " outside [0,1]");
  }
}

// Largest r in 0..n with the double quotient r/n <= t. This matches counting
// pseudo-observations r/n against t in floating point exactly, which a plain
// floor(n*t) can miss by one when n*t rounds across an integer.
int count_index(int n, double t) {
  int j = static_cast<int>(std::floor(static_cast<double>(n) * t));
  j = std::clamp(j, 0, n);
  while (j + 1 <= n && static_cast<double>(j + 1) / n <= t) ++j;
  while (j > 0 && static_cast<double>(j) / n > t) --j;
  return j;
}

}  // namespace

CheckerboardCopula CheckerboardCopula::from_pseudo(const PseudoSample& pseudo) {
  return from_ranks(pseudo.ranks);
}

CheckerboardCopula CheckerboardCopula::from_ranks(std::vector<std::vector<int>> ranks) {
  if (ranks.size() < 2) throw InputError("need at least two rank columns");
  const std::size_t n = ranks.front().size();
  if (n < 2) throw InputError("need at least two observations");

  std::vector<char> seen(n + 1, 0);
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k].size() != n) throw InputError("rank columns differ in length");
    std::fill(seen.begin(), seen.end(), 0);
    for (int r : ranks[k]) {
      if (r < 1 || r > static_cast<int>(n) || seen[static_cast<std::size_t>(r)]) {
        throw InputError("column " + std::to_string(k + 1) +
                         " is not a permutation of 1.." + std::to_string(n));
      }
      seen[static_cast<std::size_t>(r)] = 1;
    }
  }

  CheckerboardCopula cop;
  cop.n_ = static_cast<int>(n);
  cop.ranks_ = std::move(ranks);
  if (cop.ranks_.size() == 2) {
    const std::size_t w = n + 1;
    cop.prefix_.assign(w * w, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(cop.ranks_[0][i]);
      const auto s = static_cast<std::size_t>(cop.ranks_[1][i]);
      cop.prefix_[r * w + s] = 1;
    }
    for (std::size_t r = 1; r < w; ++r) {
      std::int32_t row_sum = 0;
      for (std::size_t s = 1; s < w; ++s) {
        row_sum += cop.prefix_[r * w + s];
        cop.prefix_[r * w + s] = cop.prefix_[(r - 1) * w + s] + row_sum;
      }
    }
  }
  return cop;
}

int CheckerboardCopula::knot_count(const std::vector<int>& bound) const {
  if (bound.size() != ranks_.size()) {
    throw ConfigError("bound dimension does not match copula dimension");
  }
  if (ranks_.size() == 2) {
    const int j = std::clamp(bound[0], 0, n_);
    const int k = std::clamp(bound[1], 0, n_);
    return prefix_count(j, k);
  }
  int count = 0;
  for (int i = 0; i < n_; ++i) {
    bool inside = true;
    for (std::size_t k = 0; k < ranks_.size() && inside; ++k) {
      inside = ranks_[k][static_cast<std::size_t>(i)] <= bound[k];
    }
    count += inside ? 1 : 0;
  }
  return count;
}

double empirical_copula(const CheckerboardCopula& cop, double u, double v) {
  if (cop.m() != 2) throw ConfigError("empirical_copula needs a bivariate copula");
  require_unit_interval(u, "u");
  require_unit_interval(v, "v");
  const int j = count_index(cop.n(), u);
  const int k = count_index(cop.n(), v);
  return static_cast<double>(cop.prefix_count(j, k)) / cop.n();
}

double checkerboard_copula(const CheckerboardCopula& cop, double u, double v) {
  if (cop.m() != 2) throw ConfigError("checkerboard_copula needs a bivariate copula");
  require_unit_interval(u, "u");
  require_unit_interval(v, "v");
  const int n = cop.n();
  const double nu = n * u;
  const double nv = n * v;
  int a = std::clamp(static_cast<int>(std::floor(nu)), 0, n);
  int b = std::clamp(static_cast<int>(std::floor(nv)), 0, n);
  const double fu = nu - a;
  const double fv = nv - b;
  const auto emp = [&](int j, int k) {
    return static_cast<double>(cop.prefix_count(std::min(j, n), std::min(k, n))) / n;
  };
  double value = (1.0 - fu) * (1.0 - fv) * emp(a, b);
  if (fu > 0.0) value += fu * (1.0 - fv) * emp(a + 1, b);
  if (fv > 0.0) value += (1.0 - fu) * fv * emp(a, b + 1);
  if (fu > 0.0 && fv > 0.0) value += fu * fv * emp(a + 1, b + 1);
  return value;
}

double multilinear_copula(const CheckerboardCopula& cop, const std::vector<double>& t) {
  const auto m = static_cast<std::size_t>(cop.m());
  if (t.size() != m) {
    throw ConfigError("evaluation point has dimension " + std::to_string(t.size()) +
                      ", copula has " + std::to_string(m));
  }
  const int n = cop.n();
  std::vector<int> knot(m);
  std::vector<double> frac(m);
  for (std::size_t k = 0; k < m; ++k) {
    require_unit_interval(t[k], "t");
    const double nt = n * t[k];
    knot[k] = std::clamp(static_cast<int>(std::floor(nt)), 0, n);
    frac[k] = nt - knot[k];
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const int r = cop.rank_column(k)[static_cast<std::size_t>(i)];
      if (r <= knot[k]) continue;
      if (r == knot[k] + 1 && frac[k] > 0.0) {
        w *= frac[k];
      } else {
        w = 0.0;
        break;
      }
    }
    total += w;
  }
  return total / n;
}

NullMoments null_moments(int n, double u, double v) {
  if (n < 2) throw ConfigError("null moments need n >= 2");
  require_unit_interval(u, "u");
  require_unit_interval(v, "v");
  const auto eps = [n](double t) {
    const double nt = n * t;
    const double frac = nt - std::floor(nt);
    return frac * (1.0 - frac) / n;
  };
  NullMoments out;
  out.mean = u * v;
  out.variance = (u * (1.0 - u) - eps(u)) * (v * (1.0 - v) - eps(v)) / (n - 1);
  return out;
}

}  // namespace qdep
