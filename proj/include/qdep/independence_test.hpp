#pragma once

// Global independence tests: max and trimmed-mean functionals of the
// root-n-standardized dependence surface, their Monte Carlo null
// distributions, critical values, and p-values.

#include <cstdint>
#include <string>
#include <vector>

#include "qdep/surface.hpp"

namespace qdep {

enum class StatKind { Tn, Vn, MaxBet };

std::string stat_kind_name(StatKind kind);
StatKind stat_kind_from_name(const std::string& name);

// Parameters that fully determine a null calibration run.
struct TestConfig {
  int n = 0;
  int s = 5;  // grid depth; d = 2^(s+1) - 1 points per axis
  double t_frac = 0.95;
  int runs = 100000;
  std::uint64_t master_seed = 0;

  int d() const { return (1 << (s + 1)) - 1; }
  std::int64_t k_total() const {
    return static_cast<std::int64_t>(d()) * static_cast<std::int64_t>(d());
  }
  // Order statistic where the trimmed mean starts: ceil(t_frac * d^2).
  std::int64_t kappa() const;
  void validate() const;
};

// Sorted Monte Carlo sample of a statistic under independence.
struct NullSample {
  TestConfig config;
  StatKind kind = StatKind::Tn;
  std::vector<double> sorted_values;  // ascending
};

// Largest absolute standardized surface value.
double v_stat(const QSurface& surface);
// Mean of the largest (1 - t_frac) share of absolute standardized values:
// average of the order statistics kappa..d^2 of |sqrt(n) q|.
double t_stat(const QSurface& surface, double t_frac);

// Shared kernels operating on raw unnormalized values plus the sqrt(n) scale;
// the Monte Carlo engine uses these directly so replicate statistics match
// the public functions bit for bit.
double v_stat_from_values(const std::vector<double>& q, double scale);
double t_stat_from_values(const std::vector<double>& q, double scale, double t_frac,
                          std::vector<double>& scratch);

// Monte Carlo null distribution of the requested statistic: config.runs
// replicates of independent rank permutations, replicate r on the substream
// of index r. Deterministic for fixed config regardless of thread count.
NullSample null_distribution(const TestConfig& config, StatKind kind, int threads = 0);

// Wraps already-simulated replicate values (any order, one per run) into a
// sorted null sample; used when one engine pass feeds several consumers.
NullSample null_sample_from_values(const TestConfig& config, StatKind kind,
                                   std::vector<double> values);

// The ceil((1-alpha) * runs)-th smallest null value.
double critical_value(const NullSample& null, double alpha);

// Rank-based p-value (1 + #{null >= observed}) / (runs + 1).
double p_value(double observed, const NullSample& null);

}  // namespace qdep
