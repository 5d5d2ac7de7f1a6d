#pragma once

// Rank transforms: raw observation columns to rank vectors (ties broken
// uniformly at random from a seeded stream) and to pseudo-observations R_i/n.

#include <cstdint>
#include <string>
#include <vector>

#include "qdep/random.hpp"

namespace qdep {

// Column-major numeric data set. labels may be empty or one entry per column.
struct Sample {
  std::vector<std::vector<double>> columns;
  std::vector<std::string> labels;

  std::size_t dim() const { return columns.size(); }
  std::size_t size() const { return columns.empty() ? 0 : columns.front().size(); }
};

// Throws InputError unless all columns have equal length n >= 2, there is at
// least one column, and every entry is finite.
void validate_sample(const Sample& sample);

// Ranks of one column plus the tie-break randomization trace.
struct PseudoSample {
  int n = 0;
  std::vector<std::vector<int>> ranks;  // one permutation of 1..n per column
  std::vector<int> tie_count;           // tied groups (size >= 2) per column
  std::uint64_t seed_trace = 0;         // master seed the tie streams derive from

  std::size_t dim() const { return ranks.size(); }
  // Pseudo-observation R_i / n for column col at row i (both zero-based).
  double pseudo(std::size_t col, std::size_t i) const {
    return static_cast<double>(ranks[col][i]) / static_cast<double>(n);
  }
};

// Ranks 1..n of values, ties broken uniformly at random using tie_stream.
// Tie-free inputs consume nothing from the stream. If tied_groups is non-null
// it receives the number of tied groups of size >= 2.
std::vector<int> rank_vector(const std::vector<double>& values,
                             RandomStream& tie_stream, int* tied_groups = nullptr);

// Ranks for every column of sample; column k uses the tie-break substream of
// index k so adding or reordering other columns never changes its ranks.
PseudoSample pseudo_observations(const Sample& sample, std::uint64_t master_seed);

}  // namespace qdep
