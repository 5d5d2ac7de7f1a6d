#include "qdep/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdep/errors.hpp"
#include "qdep/serialize.hpp"

namespace qdep {

namespace {

using nlohmann::json;

// Canonical configs: nlohmann objects keep keys sorted, so dump() is a stable
// canonical string.
json canonical_null_config(const TestConfig& config, StatKind kind) {
  return json{{"kind", stat_kind_name(kind)}, {"n", config.n},       {"s", config.s},
              {"d", config.d()},              {"t_frac", config.t_frac},
              {"runs", config.runs},          {"master_seed", config.master_seed}};
}

json canonical_barrier_config(int n, int s, double alpha_side, int runs,
                              std::uint64_t master_seed) {
  const DyadicGrid grid = DyadicGrid::from_depth(s);
  return json{{"kind", "barriers"}, {"n", n},
              {"s", s},             {"d", grid.d},
              {"alpha_side", alpha_side}, {"runs", runs},
              {"master_seed", master_seed}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open cache file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw CacheError("failed reading cache file '" + path.string() + "'");
  return std::move(buf).str();
}

json parse_cache_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    throw CacheError("cache file '" + path.string() +
                     "' is not valid JSON; delete it to recalibrate");
  }
  return parsed;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::filesystem::path resolve_cache_dir(const std::string& cli_value) {
  if (const char* env = std::getenv("QDEP_CACHE_DIR"); env && *env) {
    return std::filesystem::path(env);
  }
  if (!cli_value.empty()) return std::filesystem::path(cli_value);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "qdep";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "qdep";
  }
  return std::filesystem::path(".qdep-cache");
}

std::string null_sample_cache_name(const TestConfig& config, StatKind kind) {
  return hex64(fnv1a64(canonical_null_config(config, kind).dump())) + ".json";
}

std::string barrier_cache_name(int n, int s, double alpha_side, int runs,
                               std::uint64_t master_seed) {
  return hex64(fnv1a64(
             canonical_barrier_config(n, s, alpha_side, runs, master_seed).dump())) +
         ".json";
}

void write_cache_text(const std::filesystem::path& target, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(target.parent_path(), ec);
  if (ec) {
    throw CacheError("cannot create cache directory '" +
                     target.parent_path().string() + "': " + ec.message());
  }
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw CacheError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    throw CacheError("cannot move cache file into place at '" + target.string() +
                     "': " + ec.message());
  }
}

NullSample load_or_calibrate_null(const std::filesystem::path& dir,
                                  const TestConfig& config, StatKind kind, int threads,
                                  bool* was_cached) {
  config.validate();
  const std::filesystem::path path = dir / null_sample_cache_name(config, kind);
  if (std::filesystem::exists(path)) {
    NullSample sample;
    try {
      sample = null_sample_from_json(parse_cache_json(path));
    } catch (const CacheError&) {
      throw;
    } catch (const std::exception& e) {
      throw CacheError("cache file '" + path.string() + "' is unusable (" + e.what() +
                       "); delete it to recalibrate");
    }
    const std::string want = canonical_null_config(config, kind).dump();
    const std::string have = canonical_null_config(sample.config, sample.kind).dump();
    if (want != have) {
      throw CacheError("cache file '" + path.string() +
                       "' holds a different configuration; delete it to recalibrate");
    }
    if (was_cached) *was_cached = true;
    return sample;
  }
  NullSample sample = null_distribution(config, kind, threads);
  write_cache_text(path, null_sample_to_json(sample).dump(2) + "\n");
  if (was_cached) *was_cached = false;
  return sample;
}

BarrierTable load_or_calibrate_barriers(const std::filesystem::path& dir, int n, int s,
                                        double alpha_side, int runs,
                                        std::uint64_t master_seed, int threads,
                                        bool* was_cached) {
  const std::filesystem::path path =
      dir / barrier_cache_name(n, s, alpha_side, runs, master_seed);
  if (std::filesystem::exists(path)) {
    BarrierTable table;
    try {
      table = barrier_table_from_json(parse_cache_json(path));
    } catch (const CacheError&) {
      throw;
    } catch (const std::exception& e) {
      throw CacheError("cache file '" + path.string() + "' is unusable (" + e.what() +
                       "); delete it to recalibrate");
    }
    const std::string want =
        canonical_barrier_config(n, s, alpha_side, runs, master_seed).dump();
    const std::string have =
        canonical_barrier_config(table.meta.n, table.meta.s, table.meta.alpha_side,
                                 table.meta.runs, table.meta.master_seed)
            .dump();
    if (want != have) {
      throw CacheError("cache file '" + path.string() +
                       "' holds a different configuration; delete it to recalibrate");
    }
    if (was_cached) *was_cached = true;
    return table;
  }
  BarrierTable table = calibrate_barriers(n, s, alpha_side, runs, master_seed, threads);
  write_cache_text(path, barrier_table_to_json(table).dump(2) + "\n");
  if (was_cached) *was_cached = false;
  return table;
}

}  // namespace qdep
