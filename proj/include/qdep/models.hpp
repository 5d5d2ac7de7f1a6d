#pragma once

// Scenario models for power studies: simple regressions, heteroscedastic
// regressions, random-effect models, classical bivariate laws, the
// extreme-mixture family with weight theta, and pure independence. Plus the
// power estimator that runs a test over repeated draws from a model.

#include <cstdint>
#include <string>

#include "qdep/independence_test.hpp"
#include "qdep/ranks.hpp"

namespace qdep {

enum class ModelId {
  Null,     // independent uniforms
  Frechet,  // V = U with probability theta, else V = 1 - U
  SR1, SR2, SR3, SR4, SR5,
  HR1, HR2,
  RE1, RE2, RE3, RE4,
  BM1, BM2, BM3, BM4, BM5, BM6, BM7, BM8, BM9, BM10, BM11,
};

struct ModelSpec {
  ModelId id = ModelId::Null;
  double theta = 0.0;  // mixture weight; used by Frechet, fixed for BM6/BM7

  // Accepts the model codes above plus "NULL" and "FRECHET(theta)";
  // case-insensitive. Throws ConfigError for unknown names or theta
  // outside [0,1].
  static ModelSpec parse(const std::string& text);
  std::string name() const;
};

// n independent draws; deterministic in (model, n, seed). Column 1 is X,
// column 2 is Y. Models BM5, BM10, BM11 throw NotImplementedError naming the
// reference that defines them.
Sample generate(const ModelSpec& model, int n, std::uint64_t seed);

// Closed-form CDF of the model's X margin, for distribution sanity checks.
double x_margin_cdf(const ModelSpec& model, double x);

// Kolmogorov-Smirnov distance between the empirical X margin of a fresh
// sample and its closed-form CDF.
double ks_statistic_x_margin(const ModelSpec& model, int n, std::uint64_t seed);

struct PowerEstimate {
  ModelSpec model;
  StatKind kind = StatKind::Tn;
  TestConfig config;   // the null calibration the test ran against
  double alpha = 0.0;
  int reps = 0;
  double power = 0.0;  // rejection fraction
  double mc_se = 0.0;  // binomial standard error sqrt(p(1-p)/reps)
};

// Rejection rate of the level-alpha test over reps fresh samples of size
// null.config.n; replicate r draws from the power substream of index r.
PowerEstimate power(const ModelSpec& model, StatKind kind, const NullSample& null,
                    double alpha, int reps, std::uint64_t master_seed,
                    int threads = 0);

}  // namespace qdep
