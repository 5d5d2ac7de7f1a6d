#pragma once

// Calibration cache: null samples and barrier tables persisted as versioned
// JSON, keyed by the FNV-1a-64 hash of the canonical configuration JSON.
// Expensive Monte Carlo runs are computed once and reused.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "qdep/diagram.hpp"
#include "qdep/independence_test.hpp"

namespace qdep {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Cache directory resolution: $QDEP_CACHE_DIR first, then the --cache-dir
// value, then $XDG_CACHE_HOME/qdep, then $HOME/.cache/qdep, finally
// ./.qdep-cache.
std::filesystem::path resolve_cache_dir(const std::string& cli_value);

// File names are "<16 hex digits>.json": the hash of the canonical config
// JSON, which includes the statistic kind so the three statistics of one
// TestConfig get distinct entries.
std::string null_sample_cache_name(const TestConfig& config, StatKind kind);
std::string barrier_cache_name(int n, int s, double alpha_side, int runs,
                               std::uint64_t master_seed);

// Load when present and exactly matching the requested configuration,
// otherwise compute and persist. A present-but-corrupt or mismatching file
// raises CacheError (delete the file to recompute). was_cached, when
// non-null, reports whether the value came from disk.
NullSample load_or_calibrate_null(const std::filesystem::path& dir,
                                  const TestConfig& config, StatKind kind,
                                  int threads = 0, bool* was_cached = nullptr);
BarrierTable load_or_calibrate_barriers(const std::filesystem::path& dir, int n, int s,
                                        double alpha_side, int runs,
                                        std::uint64_t master_seed, int threads = 0,
                                        bool* was_cached = nullptr);

// Shared atomic-ish write helper: writes to a temp file in the same directory
// and renames over the target. Throws CacheError on failure.
void write_cache_text(const std::filesystem::path& target, const std::string& text);

}  // namespace qdep
