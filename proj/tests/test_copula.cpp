#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <doctest.h>

#include "qdep/copula.hpp"
#include "qdep/errors.hpp"
#include "qdep/random.hpp"

using namespace qdep;

namespace {

CheckerboardCopula tiny_copula() {
  // Two rank columns of n = 3: x ranks 1,2,3 paired with y ranks 2,3,1.
  return CheckerboardCopula::from_ranks({{1, 2, 3}, {2, 3, 1}});
}

}  // namespace

TEST_CASE("empirical copula counts rank pairs") {
  const CheckerboardCopula cop = tiny_copula();
  CHECK(empirical_copula(cop, 2.0 / 3.0, 2.0 / 3.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(empirical_copula(cop, 1.0 / 3.0, 1.0 / 3.0) == 0.0);
  CHECK(empirical_copula(cop, 1.0, 1.0) == 1.0);
  CHECK(empirical_copula(cop, 0.0, 0.5) == 0.0);
  CHECK(empirical_copula(cop, 1.0, 0.4) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("checkerboard interpolation hits frozen values") {
  const CheckerboardCopula cop = tiny_copula();
  CHECK(checkerboard_copula(cop, 0.5, 0.5) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(checkerboard_copula(cop, 1.0 / 3.0, 2.0 / 3.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(checkerboard_copula(cop, 0.3, 0.8) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("checkerboard matches the empirical copula at lattice knots") {
  RandomStream rng(11);
  std::vector<int> rx, ry;
  random_permutation(17, rng, rx);
  random_permutation(17, rng, ry);
  const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});
  for (int j = 0; j <= 17; ++j) {
    for (int k = 0; k <= 17; ++k) {
      const double u = static_cast<double>(j) / 17.0;
      const double v = static_cast<double>(k) / 17.0;
      CHECK(checkerboard_copula(cop, u, v) ==
            doctest::Approx(empirical_copula(cop, u, v)).epsilon(1e-14));
    }
  }
}

TEST_CASE("checkerboard stays within 2/n of the empirical copula") {
  RandomStream rng(21);
  for (int n : {10, 100}) {
    std::vector<int> rx, ry;
    random_permutation(n, rng, rx);
    random_permutation(n, rng, ry);
    const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});
    for (int probe = 0; probe < 500; ++probe) {
      const double u = rng.next_double();
      const double v = rng.next_double();
      const double gap =
          std::fabs(empirical_copula(cop, u, v) - checkerboard_copula(cop, u, v));
      CHECK(gap <= 2.0 / n + 1e-12);
    }
  }
}

TEST_CASE("checkerboard copula is a copula") {
  RandomStream rng(33);
  std::vector<int> rx, ry;
  random_permutation(23, rng, rx);
  random_permutation(23, rng, ry);
  const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});

  // Uniform margins.
  for (double t : {0.1, 0.37, 0.5, 0.93}) {
    CHECK(checkerboard_copula(cop, t, 1.0) == doctest::Approx(t).epsilon(1e-14));
    CHECK(checkerboard_copula(cop, 1.0, t) == doctest::Approx(t).epsilon(1e-14));
    CHECK(checkerboard_copula(cop, t, 0.0) == 0.0);
    CHECK(checkerboard_copula(cop, 0.0, t) == 0.0);
  }
  // 2-increasing on random rectangles.
  for (int probe = 0; probe < 300; ++probe) {
    double u1 = rng.next_double(), u2 = rng.next_double();
    double v1 = rng.next_double(), v2 = rng.next_double();
    if (u1 > u2) std::swap(u1, u2);
    if (v1 > v2) std::swap(v1, v2);
    const double mass = checkerboard_copula(cop, u2, v2) -
                        checkerboard_copula(cop, u1, v2) -
                        checkerboard_copula(cop, u2, v1) +
                        checkerboard_copula(cop, u1, v1);
    CHECK(mass >= -1e-14);
  }
}

TEST_CASE("reflecting one rank column reflects the empirical copula") {
  RandomStream rng(55);
  const int n = 19;
  std::vector<int> rx, ry;
  random_permutation(n, rng, rx);
  random_permutation(n, rng, ry);
  std::vector<int> ry_flip(ry.size());
  for (std::size_t i = 0; i < ry.size(); ++i) ry_flip[i] = n + 1 - ry[i];

  const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});
  const CheckerboardCopula flip = CheckerboardCopula::from_ranks({rx, ry_flip});
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      const double u = static_cast<double>(j) / n;
      const double v = static_cast<double>(k) / n;
      // C'(u,v) = u - C(u, 1-v) at lattice knots.
      CHECK(empirical_copula(flip, u, v) ==
            doctest::Approx(u - empirical_copula(cop, u, 1.0 - v)).epsilon(1e-14));
    }
  }
}

TEST_CASE("null moments match the closed form") {
  // Dyadic arguments, n = 4: every quantity is exactly representable.
  const NullMoments a = null_moments(4, 0.125, 0.125);
  CHECK(a.mean == 0.125 * 0.125);
  CHECK(a.variance == 0.000732421875);  // 3/4096

  const NullMoments b = null_moments(4, 0.5, 0.5);
  CHECK(b.mean == 0.25);
  CHECK(b.variance == doctest::Approx(1.0 / 48.0).epsilon(1e-15));

  const NullMoments c = null_moments(4, 0.3, 0.7);
  CHECK(c.mean == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(c.variance == doctest::Approx(289.0 / 30000.0).epsilon(1e-14));
}

TEST_CASE("null moments agree with exhaustive enumeration at n=4") {
  // Average the checkerboard estimate over all 24 rank permutations of the
  // second column; the first column can be fixed by symmetry.
  const std::vector<std::vector<int>> perms = [] {
    std::vector<std::vector<int>> out;
    std::vector<int> p{1, 2, 3, 4};
    do {
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  REQUIRE(perms.size() == 24);

  for (const auto& uv : std::vector<std::pair<double, double>>{
           {0.3, 0.7}, {0.55, 0.2}, {0.83, 0.41}}) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& perm : perms) {
      const CheckerboardCopula cop = CheckerboardCopula::from_ranks({{1, 2, 3, 4}, perm});
      const double c = checkerboard_copula(cop, uv.first, uv.second);
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / 24.0;
    const double var = sum2 / 24.0 - mean * mean;
    const NullMoments m = null_moments(4, uv.first, uv.second);
    CHECK(mean == doctest::Approx(m.mean).epsilon(1e-12));
    CHECK(var == doctest::Approx(m.variance).epsilon(1e-12));
  }
}

TEST_CASE("multilinear copula generalizes the bilinear one") {
  RandomStream rng(77);
  std::vector<int> rx, ry;
  random_permutation(13, rng, rx);
  random_permutation(13, rng, ry);
  const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});
  for (int probe = 0; probe < 200; ++probe) {
    const double u = rng.next_double();
    const double v = rng.next_double();
    CHECK(multilinear_copula(cop, {u, v}) ==
          doctest::Approx(checkerboard_copula(cop, u, v)).epsilon(1e-14));
  }
}

TEST_CASE("trivariate multilinear copula hits a frozen value") {
  const CheckerboardCopula cop = CheckerboardCopula::from_ranks(
      {{1, 2, 3, 4}, {2, 4, 1, 3}, {3, 1, 4, 2}});
  CHECK(multilinear_copula(cop, {0.6, 0.45, 0.8}) ==
        doctest::Approx(0.22).epsilon(1e-15));
  // Fully concordant ranks at the center knot.
  const CheckerboardCopula conc = CheckerboardCopula::from_ranks(
      {{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}});
  CHECK(multilinear_copula(conc, {0.5, 0.5, 0.5}) == 0.5);
}

TEST_CASE("knot counts agree with the prefix table") {
  RandomStream rng(88);
  std::vector<int> rx, ry;
  random_permutation(12, rng, rx);
  random_permutation(12, rng, ry);
  const CheckerboardCopula cop = CheckerboardCopula::from_ranks({rx, ry});
  for (int j = 0; j <= 12; ++j) {
    for (int k = 0; k <= 12; ++k) {
      CHECK(cop.knot_count({j, k}) == cop.prefix_count(j, k));
    }
  }
}

TEST_CASE("rank validation rejects non-permutations") {
  CHECK_THROWS_AS(CheckerboardCopula::from_ranks({{1, 2, 2}, {1, 2, 3}}), InputError);
  CHECK_THROWS_AS(CheckerboardCopula::from_ranks({{1, 2, 3}, {0, 1, 2}}), InputError);
  CHECK_THROWS_AS(CheckerboardCopula::from_ranks({{1, 2, 3}}), InputError);
  CHECK_THROWS_AS(CheckerboardCopula::from_ranks({{1, 2}, {1, 2, 3}}), InputError);
}
