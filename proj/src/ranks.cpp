#include "qdep/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdep/errors.hpp"

namespace qdep {

void validate_sample(const Sample& sample) {
  if (sample.columns.empty()) throw InputError("sample has no columns");
  const std::size_t n = sample.columns.front().size();
  if (n < 2) throw InputError("sample needs at least two rows");
  for (std::size_t k = 0; k < sample.columns.size(); ++k) {
    const auto& col = sample.columns[k];
    if (col.size() != n) {
      throw InputError("column " + std::to_string(k + 1) + " has " +
                       std::to_string(col.size()) + " rows, expected " +
                       std::to_string(n));
    }
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (!std::isfinite(col[i])) {
        throw InputError("non-finite value in column " + std::to_string(k + 1) +
                         ", row " + std::to_string(i + 1));
      }
    }
  }
  if (!sample.labels.empty() && sample.labels.size() != sample.columns.size()) {
    throw InputError("label count does not match column count");
  }
}

std::vector<int> rank_vector(const std::vector<double>& values,
                             RandomStream& tie_stream, int* tied_groups) {
  const std::size_t n = values.size();
  if (n == 0) throw InputError("cannot rank an empty vector");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("cannot rank non-finite values");
  }

  // Order indices by value, breaking equal values by index so the pre-shuffle
  // order is deterministic; the shuffle below then makes every admissible
  // tie-break permutation equally likely.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });

  int groups = 0;
  std::size_t lo = 0;
  while (lo < n) {
    std::size_t hi = lo + 1;
    while (hi < n && values[order[hi]] == values[order[lo]]) ++hi;
    if (hi - lo > 1) {
      ++groups;
      shuffle_range(order.begin() + static_cast<std::ptrdiff_t>(lo),
                    order.begin() + static_cast<std::ptrdiff_t>(hi), tie_stream);
    }
    lo = hi;
  }
  if (tied_groups) *tied_groups = groups;

  std::vector<int> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

PseudoSample pseudo_observations(const Sample& sample, std::uint64_t master_seed) {
  validate_sample(sample);
  PseudoSample out;
  out.n = static_cast<int>(sample.size());
  out.seed_trace = master_seed;
  out.ranks.reserve(sample.dim());
  out.tie_count.reserve(sample.dim());
  for (std::size_t k = 0; k < sample.dim(); ++k) {
    RandomStream stream =
        RandomStream::substream(master_seed, StreamDomain::TieBreak, k);
    int groups = 0;
    out.ranks.push_back(rank_vector(sample.columns[k], stream, &groups));
    out.tie_count.push_back(groups);
  }
  return out;
}

}  // namespace qdep
