#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "qdep/cache.hpp"
#include "qdep/copula.hpp"
#include "qdep/csv.hpp"
#include "qdep/errors.hpp"
#include "qdep/random.hpp"
#include "qdep/serialize.hpp"
#include "qdep/surface.hpp"
#include "qdep/text_util.hpp"

using namespace qdep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct EnvGuard {
  std::string name;
  std::optional<std::string> saved;
  explicit EnvGuard(const char* var) : name(var) {
    if (const char* value = std::getenv(var)) saved = value;
  }
  ~EnvGuard() {
    if (saved) {
      setenv(name.c_str(), saved->c_str(), 1);
    } else {
      unsetenv(name.c_str());
    }
  }
};

QSurface small_surface() {
  RandomStream rng(88);
  std::vector<int> rx, ry;
  random_permutation(23, rng, rx);
  random_permutation(23, rng, ry);
  return q_surface(CheckerboardCopula::from_ranks({rx, ry}),
                   DyadicGrid::from_points(15));
}

}  // namespace

TEST_CASE("numeric text round trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789, 0.0, -1.0}) {
    const auto back = parse_double(format_double(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(parse_double("+3.5") == 3.5);
  CHECK_FALSE(parse_double("").has_value());
  CHECK_FALSE(parse_double("1.2.3").has_value());
  CHECK_FALSE(parse_double("4x").has_value());
  CHECK_FALSE(parse_double("x4").has_value());
  CHECK(trim_view("  a b \r\n") == "a b");
}

TEST_CASE("CSV parsing detects headers and classic quirks") {
  const CsvTable with_header = parse_numeric_csv("x,y\n1,2\n3,4\n", "mem");
  CHECK(with_header.had_header);
  CHECK(with_header.header == std::vector<std::string>{"x", "y"});
  CHECK(with_header.columns[0] == std::vector<double>{1.0, 3.0});
  CHECK(with_header.columns[1] == std::vector<double>{2.0, 4.0});

  const CsvTable plain = parse_numeric_csv("1,2\n3,4\n", "mem");
  CHECK_FALSE(plain.had_header);
  CHECK(plain.rows() == 2);

  const CsvTable bom = parse_numeric_csv("\xEF\xBB\xBFx,y\n1,2\n", "mem");
  CHECK(bom.had_header);
  CHECK(bom.header.front() == "x");

  const CsvTable crlf = parse_numeric_csv("x,y\r\n1,2\r\n5,6\r\n", "mem");
  CHECK(crlf.rows() == 2);
  CHECK(crlf.columns[1][1] == 6.0);

  const CsvTable gaps = parse_numeric_csv("1,2\n\n  \n3,4\n", "mem");
  CHECK(gaps.rows() == 2);

  const CsvTable spaced = parse_numeric_csv(" 1 , 2 \n 3 , 4 \n", "mem");
  CHECK(spaced.columns[0][1] == 3.0);
}

TEST_CASE("CSV parsing reports malformed input with its location") {
  CHECK_THROWS_WITH_AS(parse_numeric_csv("1,2\n3\n", "mem"),
                       doctest::Contains("line 2"), InputError);
  CHECK_THROWS_WITH_AS(parse_numeric_csv("1,2\n3,oops\n", "mem"),
                       doctest::Contains("'oops'"), InputError);
  CHECK_THROWS_WITH_AS(parse_numeric_csv("", "mem"), doctest::Contains("empty"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse_numeric_csv("x,y\n", "mem"),
                       doctest::Contains("no data rows"), InputError);
  CHECK_THROWS_AS(read_numeric_csv("/nonexistent/nowhere.csv"), InputError);
}

TEST_CASE("column selection carries labels and validates indices") {
  const CsvTable table = parse_numeric_csv("a,b,c\n1,2,3\n4,5,6\n7,8,9\n", "mem");
  const Sample sample = sample_from_table(table, {3, 1});
  CHECK(sample.labels == std::vector<std::string>{"c", "a"});
  CHECK(sample.columns[0] == std::vector<double>{3.0, 6.0, 9.0});
  CHECK(sample.columns[1] == std::vector<double>{1.0, 4.0, 7.0});

  CHECK_THROWS_AS(sample_from_table(table, {0, 1}), InputError);
  CHECK_THROWS_AS(sample_from_table(table, {1, 4}), InputError);

  const CsvTable narrow = parse_numeric_csv("1\n2\n", "mem");
  CHECK_THROWS_AS(sample_from_table(narrow, {1, 1}), InputError);
}

TEST_CASE("surface CSV round trips bit for bit") {
  const QSurface surface = small_surface();
  const std::string text = qsurface_csv_text(surface);
  const ParsedQSurface parsed = parse_qsurface_csv(text);
  REQUIRE(parsed.grid_points.size() == 15);
  REQUIRE(parsed.values.size() == 15);
  for (int j = 1; j <= 15; ++j) {
    CHECK(parsed.grid_points[static_cast<std::size_t>(j - 1)] == surface.grid.point(j));
    for (int k = 1; k <= 15; ++k) {
      CHECK(parsed.values[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)] ==
            surface.q_at(j, k));
    }
  }
  CHECK_THROWS_AS(parse_qsurface_csv(""), InputError);
  CHECK_THROWS_AS(parse_qsurface_csv("0.5\n0.1\n0.2\n"), InputError);
  CHECK_THROWS_AS(parse_qsurface_csv("0.25,0.5\n1,2\n"), InputError);
}

TEST_CASE("hashing hits the reference constants") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
  CHECK(hex64(5) == "0000000000000005");
  CHECK(hex64(0) == "0000000000000000");
}

TEST_CASE("cache names differ across configurations and kinds") {
  TestConfig cfg;
  cfg.n = 10;
  cfg.s = 2;
  cfg.runs = 150;
  cfg.master_seed = 42;
  const std::string tn = null_sample_cache_name(cfg, StatKind::Tn);
  const std::string vn = null_sample_cache_name(cfg, StatKind::Vn);
  CHECK(tn.size() == 21);  // 16 hex digits + ".json"
  CHECK(tn.substr(16) == ".json");
  CHECK(tn != vn);

  TestConfig other = cfg;
  other.master_seed = 43;
  CHECK(null_sample_cache_name(other, StatKind::Tn) != tn);
  CHECK(barrier_cache_name(10, 2, 0.05, 150, 42) !=
        barrier_cache_name(10, 2, 0.025, 150, 42));
}

TEST_CASE("cache directory resolution follows the documented precedence") {
  EnvGuard g1("QDEP_CACHE_DIR");
  EnvGuard g2("XDG_CACHE_HOME");
  EnvGuard g3("HOME");

  setenv("QDEP_CACHE_DIR", "/tmp/qdep-env", 1);
  CHECK(resolve_cache_dir("/tmp/qdep-cli") == fs::path("/tmp/qdep-env"));

  unsetenv("QDEP_CACHE_DIR");
  CHECK(resolve_cache_dir("/tmp/qdep-cli") == fs::path("/tmp/qdep-cli"));

  setenv("XDG_CACHE_HOME", "/tmp/xdg", 1);
  CHECK(resolve_cache_dir("") == fs::path("/tmp/xdg") / "qdep");

  unsetenv("XDG_CACHE_HOME");
  setenv("HOME", "/tmp/home", 1);
  CHECK(resolve_cache_dir("") == fs::path("/tmp/home") / ".cache" / "qdep");

  unsetenv("HOME");
  CHECK(resolve_cache_dir("") == fs::path(".qdep-cache"));
}

TEST_CASE("null samples survive a JSON round trip and reject bad documents") {
  TestConfig cfg;
  cfg.n = 10;
  cfg.s = 2;
  cfg.runs = 120;
  cfg.master_seed = 7;
  const NullSample sample = null_distribution(cfg, StatKind::Tn);
  const NullSample back = null_sample_from_json(null_sample_to_json(sample));
  CHECK(back.kind == sample.kind);
  CHECK(back.config.n == sample.config.n);
  CHECK(back.config.t_frac == sample.config.t_frac);
  CHECK(back.config.master_seed == sample.config.master_seed);
  CHECK(back.sorted_values == sample.sorted_values);

  nlohmann::json unsorted = null_sample_to_json(sample);
  std::swap(unsorted["sorted_values"].front(), unsorted["sorted_values"].back());
  CHECK_THROWS_WITH_AS(null_sample_from_json(unsorted),
                       doctest::Contains("not sorted"), InputError);

  nlohmann::json short_doc = null_sample_to_json(sample);
  short_doc["sorted_values"].erase(0);
  CHECK_THROWS_AS(null_sample_from_json(short_doc), InputError);

  nlohmann::json wrong_type = null_sample_to_json(sample);
  wrong_type["type"] = "other";
  CHECK_THROWS_AS(null_sample_from_json(wrong_type), InputError);

  nlohmann::json wrong_version = null_sample_to_json(sample);
  wrong_version["config"]["format_version"] = 999;
  CHECK_THROWS_AS(null_sample_from_json(wrong_version), InputError);
}

TEST_CASE("diagram documents reject unknown cell classes") {
  const BarrierTable table = calibrate_barriers(16, 3, 0.05, 150, 2);
  RandomStream rng(6);
  std::vector<int> rx, ry;
  random_permutation(16, rng, rx);
  random_permutation(16, rng, ry);
  const QSurface surface = q_surface(CheckerboardCopula::from_ranks({rx, ry}),
                                     DyadicGrid::from_points(15));
  nlohmann::json doc = diagram_to_json(classify(surface, table));
  doc["cells"][0][0] = "chartreuse";
  CHECK_THROWS_WITH_AS(diagram_from_json(doc), doctest::Contains("chartreuse"),
                       InputError);
}

TEST_CASE("null calibrations persist once and reload verbatim") {
  TempDir dir("qdep-test-null-cache");
  TestConfig cfg;
  cfg.n = 10;
  cfg.s = 2;
  cfg.runs = 150;
  cfg.master_seed = 42;

  bool was_cached = true;
  const NullSample first = load_or_calibrate_null(dir.path, cfg, StatKind::Tn, 0,
                                                  &was_cached);
  CHECK_FALSE(was_cached);
  CHECK(fs::exists(dir.path / null_sample_cache_name(cfg, StatKind::Tn)));

  const NullSample second = load_or_calibrate_null(dir.path, cfg, StatKind::Tn, 0,
                                                   &was_cached);
  CHECK(was_cached);
  CHECK(second.sorted_values == first.sorted_values);

  // Equivalent direct computation gives the same draw.
  const NullSample direct = null_distribution(cfg, StatKind::Tn);
  CHECK(direct.sorted_values == first.sorted_values);
}

TEST_CASE("present but wrong cache entries raise instead of recomputing") {
  TempDir dir("qdep-test-bad-cache");
  TestConfig cfg;
  cfg.n = 10;
  cfg.s = 2;
  cfg.runs = 150;
  cfg.master_seed = 42;
  const fs::path entry = dir.path / null_sample_cache_name(cfg, StatKind::Tn);

  {
    std::ofstream out(entry);
    out << "this is not json";
  }
  CHECK_THROWS_AS(load_or_calibrate_null(dir.path, cfg, StatKind::Tn), CacheError);

  // A well-formed document for some other configuration is just as unusable.
  TestConfig other = cfg;
  other.master_seed = 43;
  const NullSample mismatched = null_distribution(other, StatKind::Tn);
  {
    std::ofstream out(entry);
    out << null_sample_to_json(mismatched).dump(2) << "\n";
  }
  CHECK_THROWS_WITH_AS(load_or_calibrate_null(dir.path, cfg, StatKind::Tn),
                       doctest::Contains("delete"), CacheError);
}

TEST_CASE("barrier calibrations cache alongside null samples") {
  TempDir dir("qdep-test-barrier-cache");
  bool was_cached = true;
  const BarrierTable first =
      load_or_calibrate_barriers(dir.path, 16, 3, 0.05, 150, 11, 0, &was_cached);
  CHECK_FALSE(was_cached);
  CHECK(fs::exists(dir.path / barrier_cache_name(16, 3, 0.05, 150, 11)));

  const BarrierTable second =
      load_or_calibrate_barriers(dir.path, 16, 3, 0.05, 150, 11, 0, &was_cached);
  CHECK(was_cached);
  for (int k = 0; k < 10; ++k) {
    for (int l = 0; l < 10; ++l) {
      CHECK(second.lower[k][l] == first.lower[k][l]);
      CHECK(second.upper[k][l] == first.upper[k][l]);
    }
  }
}

TEST_CASE("cache writes create missing directories") {
  TempDir dir("qdep-test-cache-mkdir");
  const fs::path target = dir.path / "a" / "b" / "entry.json";
  write_cache_text(target, "{}\n");
  REQUIRE(fs::exists(target));
  std::ifstream in(target);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text == "{}\n");
}
