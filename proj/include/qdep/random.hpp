#pragma once

// Deterministic random number generation: xoshiro256++ streams seeded through
// the splitmix64 finalizer, plus the distribution helpers used across the
// library. Every consumer derives its stream from (master_seed, domain, index)
// so results are reproducible regardless of thread count or evaluation order.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace qdep {

// splitmix64 avalanche finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream domains keep unrelated consumers on disjoint substreams even when
// they share a master seed and run over overlapping index ranges.
enum class StreamDomain : std::uint64_t {
  TieBreak = 1,        // per-column rank tie randomization
  NullReplicate = 2,   // Monte Carlo replicates under independence
  PowerReplicate = 3,  // power-study replicates
  Generator = 4,       // scenario-model sampling
};

// Substream seed for (master, domain, index): two rounds of the golden-ratio
// increment plus finalizer. Collisions between practically reachable
// (master, domain, index) triples would need 2^64-scale coincidences.
constexpr std::uint64_t substream_seed(std::uint64_t master, StreamDomain domain,
                                       std::uint64_t index) {
  const std::uint64_t g = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h = mix64(master + g * (static_cast<std::uint64_t>(domain) + 1));
  return mix64(h + g * (index + 1));
}

// xoshiro256++ with splitmix64 state expansion. Small, fast, and passes BigCrush;
// used instead of std::mt19937_64 so that streams are identical across standard
// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t w = z;
      w = (w ^ (w >> 30)) * 0xbf58476d1ce4e5b9ULL;
      w = (w ^ (w >> 27)) * 0x94d049bb133111ebULL;
      word = w ^ (w >> 31);
    }
  }

  static RandomStream substream(std::uint64_t master, StreamDomain domain,
                                std::uint64_t index) {
    return RandomStream(substream_seed(master, domain, index));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log argument.
  double next_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on {0, ..., bound-1} via 128-bit multiply-shift. The modulo bias
  // is bound/2^64, far below anything observable.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_open()));
    const double a = 2.0 * std::numbers::pi * next_double();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Exponential with rate 1.
  double next_exponential() { return -std::log(next_open()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates shuffle of [first, last).
template <typename Iter>
void shuffle_range(Iter first, Iter last, RandomStream& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.next_below(i);
    std::swap(first[i - 1], first[j]);
  }
}

// Uniformly random permutation of 1..n, written into out.
inline void random_permutation(int n, RandomStream& rng, std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1;
  shuffle_range(out.begin(), out.end(), rng);
}

}  // namespace qdep
