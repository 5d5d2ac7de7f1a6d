#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdep/bet.hpp"
#include "qdep/cache.hpp"
#include "qdep/copula.hpp"
#include "qdep/csv.hpp"
#include "qdep/diagram.hpp"
#include "qdep/errors.hpp"
#include "qdep/independence_test.hpp"
#include "qdep/manifest.hpp"
#include "qdep/models.hpp"
#include "qdep/null_engine.hpp"
#include "qdep/ranks.hpp"
#include "qdep/serialize.hpp"
#include "qdep/surface.hpp"
#include "qdep/svg.hpp"
#include "qdep/text_util.hpp"
#include "qdep/version.hpp"

namespace {

using nlohmann::json;
using namespace qdep;

struct LoadedInput {
  Sample sample;
  std::string digest_hex;  // fnv1a-64 of the raw file bytes
  int n = 0;
};

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("failed reading '" + path.string() + "'");
  return std::move(buf).str();
}

LoadedInput load_input(const std::string& path, const std::vector<int>& cols) {
  if (cols.size() != 2) throw ConfigError("--cols needs exactly two indices");
  const std::string bytes = read_file_bytes(path);
  const CsvTable table = parse_numeric_csv(bytes, path);
  LoadedInput out;
  out.sample = sample_from_table(table, cols);
  validate_sample(out.sample);
  out.digest_hex = hex64(fnv1a64(bytes));
  out.n = static_cast<int>(out.sample.size());
  return out;
}

// Cache keys are normalized so flags a statistic ignores do not split the
// cache: vn drops t_frac, maxbet drops both the grid and t_frac.
TestConfig normalized_config(StatKind kind, int n, const DyadicGrid& grid,
                             double t_frac, int runs, std::uint64_t seed) {
  TestConfig cfg;
  cfg.n = n;
  cfg.s = kind == StatKind::MaxBet ? 0 : grid.s;
  cfg.t_frac = kind == StatKind::Tn ? t_frac : 1.0;
  cfg.runs = runs;
  cfg.master_seed = seed;
  return cfg;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write output file '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
  std::cout << "wrote " << path.string() << "\n";
}

struct CalibrateOpts {
  int n = 0;
  int d = 63;
  double alpha_side = 0.05;
  int runs = 100000;
  double t_frac = 0.95;
  std::uint64_t seed = 1;
  std::string cache_dir;
  int threads = 0;
};

void run_calibrate(const CalibrateOpts& opt) {
  const DyadicGrid grid = DyadicGrid::from_points(opt.d);
  if (!(opt.alpha_side > 0.0 && opt.alpha_side < 0.5)) {
    throw ConfigError("--alpha-side must lie in (0, 0.5)");
  }
  if (opt.runs < 100) throw ConfigError("--runs must be at least 100");

  const TestConfig tn_cfg =
      normalized_config(StatKind::Tn, opt.n, grid, opt.t_frac, opt.runs, opt.seed);
  const TestConfig vn_cfg =
      normalized_config(StatKind::Vn, opt.n, grid, opt.t_frac, opt.runs, opt.seed);
  const TestConfig mb_cfg =
      normalized_config(StatKind::MaxBet, opt.n, grid, opt.t_frac, opt.runs, opt.seed);
  tn_cfg.validate();

  const std::filesystem::path dir = resolve_cache_dir(opt.cache_dir);
  const std::filesystem::path barrier_path =
      dir / barrier_cache_name(opt.n, grid.s, opt.alpha_side, opt.runs, opt.seed);
  const std::filesystem::path tn_path = dir / null_sample_cache_name(tn_cfg, StatKind::Tn);
  const std::filesystem::path vn_path = dir / null_sample_cache_name(vn_cfg, StatKind::Vn);
  const std::filesystem::path mb_path =
      dir / null_sample_cache_name(mb_cfg, StatKind::MaxBet);

  const bool need_barriers = !std::filesystem::exists(barrier_path);
  const bool need_tn = !std::filesystem::exists(tn_path);
  const bool need_vn = !std::filesystem::exists(vn_path);
  const bool need_mb = !std::filesystem::exists(mb_path);

  // One Monte Carlo pass serves every missing artifact.
  NullCollection collected;
  if (need_barriers || need_tn || need_vn || need_mb) {
    NullRequest request;
    request.n = opt.n;
    request.grid = grid;
    request.runs = opt.runs;
    request.master_seed = opt.seed;
    request.t_frac = opt.t_frac;
    request.want_tn = need_tn;
    request.want_vn = need_vn;
    request.want_maxbet = need_mb;
    request.want_extrema = need_barriers;
    request.threads = opt.threads;
    collected = run_null_replicates(request);
  }

  if (need_barriers) {
    BarrierMeta meta;
    meta.n = opt.n;
    meta.s = grid.s;
    meta.d = grid.d;
    meta.alpha_side = opt.alpha_side;
    meta.runs = opt.runs;
    meta.master_seed = opt.seed;
    const BarrierTable table =
        barriers_from_extrema(meta, collected.cell_min, collected.cell_max);
    write_cache_text(barrier_path, barrier_table_to_json(table).dump(2) + "\n");
    std::cout << "wrote barriers " << barrier_path.string() << "\n";
  } else {
    load_or_calibrate_barriers(dir, opt.n, grid.s, opt.alpha_side, opt.runs, opt.seed,
                               opt.threads);
    std::cout << "cached barriers " << barrier_path.string() << "\n";
  }

  const auto emit = [&](const char* label, const TestConfig& cfg, StatKind kind,
                        std::vector<double>&& values, bool need,
                        const std::filesystem::path& path) {
    NullSample sample;
    if (need) {
      sample = null_sample_from_values(cfg, kind, std::move(values));
      write_cache_text(path, null_sample_to_json(sample).dump(2) + "\n");
      std::cout << "wrote " << label << " null sample " << path.string() << "\n";
    } else {
      sample = load_or_calibrate_null(dir, cfg, kind, opt.threads);
      std::cout << "cached " << label << " null sample " << path.string() << "\n";
    }
    std::cout << "  " << label << " critical values 0.90/0.95/0.99: "
              << format_double(critical_value(sample, 0.10)) << " "
              << format_double(critical_value(sample, 0.05)) << " "
              << format_double(critical_value(sample, 0.01)) << "\n";
  };
  emit("tn", tn_cfg, StatKind::Tn, std::move(collected.tn), need_tn, tn_path);
  emit("vn", vn_cfg, StatKind::Vn, std::move(collected.vn), need_vn, vn_path);
  emit("maxbet", mb_cfg, StatKind::MaxBet, std::move(collected.maxbet), need_mb, mb_path);
}

struct AnalyzeOpts {
  std::string input;
  int d = 63;
  double alpha_side = 0.05;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool svg = false;
  std::vector<int> cols = {1, 2};
  std::string cache_dir;
  int calibration_runs = 100000;
  std::uint64_t calibration_seed = 1;
  int threads = 0;
};

void run_analyze(const AnalyzeOpts& opt) {
  if (!(opt.alpha_side > 0.0 && opt.alpha_side < 0.5)) {
    throw ConfigError("--alpha-side must lie in (0, 0.5)");
  }
  const DyadicGrid grid = DyadicGrid::from_points(opt.d);
  const LoadedInput in = load_input(opt.input, opt.cols);
  const PseudoSample pseudo = pseudo_observations(in.sample, opt.seed);
  const CheckerboardCopula cop = CheckerboardCopula::from_pseudo(pseudo);
  const QSurface surface = q_surface(cop, grid);

  const std::filesystem::path dir = resolve_cache_dir(opt.cache_dir);
  bool was_cached = false;
  const BarrierTable barriers =
      load_or_calibrate_barriers(dir, in.n, grid.s, opt.alpha_side, opt.calibration_runs,
                                 opt.calibration_seed, opt.threads, &was_cached);
  const DependenceDiagram diagram = classify(surface, barriers);

  RunManifest man;
  man.command = "analyze";
  man.config = json{{"input", opt.input},
                    {"cols", opt.cols},
                    {"d", opt.d},
                    {"alpha_side", opt.alpha_side},
                    {"calibration_runs", opt.calibration_runs},
                    {"calibration_seed", opt.calibration_seed}};
  man.seeds = json{{"tie_break_master", opt.seed},
                   {"calibration_master", opt.calibration_seed}};
  man.input_path = opt.input;
  man.input_digest = in.digest_hex;

  const std::filesystem::path out_dir(opt.out_dir);
  write_text_file(out_dir / "qsurface.csv", qsurface_csv_text(surface));
  man.outputs.push_back("qsurface.csv");
  json diagram_json = diagram_to_json(diagram);
  diagram_json["manifest"] = manifest_embed_json(man);
  write_text_file(out_dir / "diagram.json", diagram_json.dump(2) + "\n");
  man.outputs.push_back("diagram.json");
  if (opt.svg) {
    write_text_file(out_dir / "diagram.svg", diagram_svg(diagram));
    man.outputs.push_back("diagram.svg");
    write_text_file(out_dir / "qsurface.svg", surface_svg(surface));
    man.outputs.push_back("qsurface.svg");
  }
  man.outputs.push_back("manifest.json");
  write_text_file(out_dir / "manifest.json",
                  manifest_file_json(man, current_utc_timestamp()).dump(2) + "\n");

  int counts[4] = {0, 0, 0, 0};
  for (int k = 0; k < 10; ++k) {
    for (int l = 0; l < 10; ++l) {
      ++counts[static_cast<int>(cell_class(diagram.cells[k][l]))];
    }
  }
  std::cout << "n=" << in.n << " d=" << grid.d << " barriers "
            << (was_cached ? "loaded from cache" : "calibrated") << "\n";
  std::cout << "cells: white=" << counts[0] << " blue=" << counts[1]
            << " pink=" << counts[2] << " mixed=" << counts[3] << "\n";
}

struct TestOpts {
  std::string input;
  std::string stat;
  int d = 63;
  double t_frac = 0.95;
  int runs = 100000;
  std::uint64_t seed = 1;
  std::vector<int> cols = {1, 2};
  std::string cache_dir;
  int threads = 0;
};

void run_test(const TestOpts& opt) {
  const StatKind kind = stat_kind_from_name(opt.stat);
  const DyadicGrid grid = DyadicGrid::from_points(opt.d);
  const LoadedInput in = load_input(opt.input, opt.cols);
  const PseudoSample pseudo = pseudo_observations(in.sample, opt.seed);

  const TestConfig cfg =
      normalized_config(kind, in.n, grid, opt.t_frac, opt.runs, opt.seed);
  cfg.validate();
  const std::filesystem::path dir = resolve_cache_dir(opt.cache_dir);
  const NullSample null = load_or_calibrate_null(dir, cfg, kind, opt.threads);

  double observed = 0.0;
  if (kind == StatKind::MaxBet) {
    observed = max_bet_statistic(symmetry_statistics(pseudo));
  } else {
    const CheckerboardCopula cop = CheckerboardCopula::from_pseudo(pseudo);
    const QSurface surface = q_surface(cop, grid);
    observed = kind == StatKind::Tn ? t_stat(surface, opt.t_frac) : v_stat(surface);
  }

  json out;
  out["command"] = "test";
  out["statistic"] = json{{"kind", stat_kind_name(kind)}, {"value", observed}};
  out["p_value"] = p_value(observed, null);
  out["config"] = json{{"n", cfg.n},
                       {"s", cfg.s},
                       {"d", cfg.d()},
                       {"t_frac", cfg.t_frac},
                       {"runs", cfg.runs},
                       {"master_seed", cfg.master_seed},
                       {"cols", opt.cols}};
  out["input"] = json{{"path", opt.input}, {"fnv1a64", in.digest_hex}};
  out["tool_version"] = kToolVersion;
  std::cout << out.dump(2) << "\n";
}

struct PowerOpts {
  std::string model;
  std::string stat = "tn";
  int n = 0;
  int d = 63;
  double t_frac = 0.95;
  double alpha = 0.05;
  int reps = 10000;
  int runs = 100000;
  std::uint64_t seed = 1;
  std::string cache_dir;
  int threads = 0;
};

void run_power(const PowerOpts& opt) {
  const ModelSpec model = ModelSpec::parse(opt.model);
  const StatKind kind = stat_kind_from_name(opt.stat);
  const DyadicGrid grid = DyadicGrid::from_points(opt.d);
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) {
    throw ConfigError("--alpha must lie in (0, 1)");
  }
  if (opt.reps < 1) throw ConfigError("--reps must be positive");

  const TestConfig cfg =
      normalized_config(kind, opt.n, grid, opt.t_frac, opt.runs, opt.seed);
  cfg.validate();
  const std::filesystem::path dir = resolve_cache_dir(opt.cache_dir);
  const NullSample null = load_or_calibrate_null(dir, cfg, kind, opt.threads);
  const PowerEstimate est =
      power(model, kind, null, opt.alpha, opt.reps, opt.seed, opt.threads);

  std::cout << "model,stat,n,d,t_frac,alpha,reps,runs,seed,power,mc_se\n";
  std::cout << est.model.name() << ',' << stat_kind_name(kind) << ',' << opt.n << ','
            << opt.d << ',' << format_double(opt.t_frac) << ','
            << format_double(opt.alpha) << ',' << opt.reps << ',' << opt.runs << ','
            << opt.seed << ',' << format_double(est.power) << ','
            << format_double(est.mc_se) << "\n";
}

struct BetOpts {
  std::string input;
  int runs = 100000;
  std::uint64_t seed = 1;
  std::vector<int> cols = {1, 2};
  std::string cache_dir;
  std::string out_dir = ".";
  bool svg = false;
  int threads = 0;
};

void run_bet(const BetOpts& opt) {
  const LoadedInput in = load_input(opt.input, opt.cols);
  const PseudoSample pseudo = pseudo_observations(in.sample, opt.seed);
  const SymmetryStats stats = symmetry_statistics(pseudo);

  TestConfig cfg;
  cfg.n = in.n;
  cfg.s = 0;
  cfg.t_frac = 1.0;
  cfg.runs = opt.runs;
  cfg.master_seed = opt.seed;
  cfg.validate();
  const std::filesystem::path dir = resolve_cache_dir(opt.cache_dir);
  const NullSample null = load_or_calibrate_null(dir, cfg, StatKind::MaxBet, opt.threads);
  const PatternSelection sel = max_bet_select(stats, null);

  json s_rows = json::array();
  json w_rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json s_row = json::array();
    json w_row = json::array();
    for (int j = 0; j < 3; ++j) {
      s_row.push_back(stats.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      w_row.push_back(stats.w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    s_rows.push_back(s_row);
    w_rows.push_back(w_row);
  }
  json out;
  out["command"] = "bet";
  out["n"] = in.n;
  out["s"] = s_rows;
  out["w"] = w_rows;
  out["selection"] = json{{"i", sel.i},
                          {"j", sel.j},
                          {"sign", sel.sign},
                          {"s_value", sel.s_value},
                          {"statistic", sel.statistic},
                          {"label", sel.label}};
  out["p_value"] = sel.p;
  out["config"] =
      json{{"n", cfg.n}, {"runs", cfg.runs}, {"master_seed", cfg.master_seed},
           {"cols", opt.cols}};
  out["input"] = json{{"path", opt.input}, {"fnv1a64", in.digest_hex}};
  out["tool_version"] = kToolVersion;
  std::cout << out.dump(2) << "\n";

  if (opt.svg) {
    std::vector<double> u(static_cast<std::size_t>(in.n));
    std::vector<double> v(static_cast<std::size_t>(in.n));
    for (int i = 0; i < in.n; ++i) {
      u[static_cast<std::size_t>(i)] =
          (pseudo.ranks[0][static_cast<std::size_t>(i)] - 0.5) / in.n;
      v[static_cast<std::size_t>(i)] =
          (pseudo.ranks[1][static_cast<std::size_t>(i)] - 0.5) / in.n;
    }
    write_text_file(std::filesystem::path(opt.out_dir) / "bet.svg", bet_svg(u, v, sel));
  }
}

void add_cols_option(CLI::App* cmd, std::vector<int>& cols) {
  cmd->add_option("--cols", cols, "1-based indices of the two data columns")
      ->expected(2)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checkerboard copula dependence diagrams and rank-based independence tests"};
  app.require_subcommand(1);

  CalibrateOpts cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "precompute Monte Carlo barriers and null samples");
  calibrate->add_option("--n", cal.n, "sample size")->required();
  calibrate->add_option("--d", cal.d, "grid points per axis, of the form 2^(s+1)-1")
      ->capture_default_str();
  calibrate->add_option("--alpha-side", cal.alpha_side, "per-side barrier level")
      ->capture_default_str();
  calibrate->add_option("--runs", cal.runs, "Monte Carlo replicates")
      ->capture_default_str();
  calibrate->add_option("--t-frac", cal.t_frac, "trim fraction of the averaged maxima")
      ->capture_default_str();
  calibrate->add_option("--seed", cal.seed, "master seed")->capture_default_str();
  calibrate->add_option("--cache-dir", cal.cache_dir,
                        "cache directory (QDEP_CACHE_DIR overrides)");
  calibrate->add_option("--threads", cal.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  calibrate->callback([&] { run_calibrate(cal); });

  AnalyzeOpts ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "dependence diagram and surface export for a CSV data set");
  analyze->add_option("--input", ana.input, "CSV file with the observations")
      ->required();
  analyze->add_option("--d", ana.d, "grid points per axis, of the form 2^(s+1)-1")
      ->capture_default_str();
  analyze->add_option("--alpha-side", ana.alpha_side, "per-side barrier level")
      ->capture_default_str();
  analyze->add_option("--seed", ana.seed, "tie-break master seed")
      ->capture_default_str();
  analyze->add_option("--out-dir", ana.out_dir, "output directory")
      ->capture_default_str();
  analyze->add_flag("--svg", ana.svg, "also render diagram.svg and qsurface.svg");
  add_cols_option(analyze, ana.cols);
  analyze->add_option("--cache-dir", ana.cache_dir,
                      "cache directory (QDEP_CACHE_DIR overrides)");
  analyze->add_option("--calibration-runs", ana.calibration_runs,
                      "Monte Carlo replicates for barrier calibration")
      ->capture_default_str();
  analyze->add_option("--calibration-seed", ana.calibration_seed,
                      "master seed for barrier calibration")
      ->capture_default_str();
  analyze->add_option("--threads", ana.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  analyze->callback([&] { run_analyze(ana); });

  TestOpts tst;
  CLI::App* test = app.add_subcommand("test", "global independence test on a CSV data set");
  test->add_option("--input", tst.input, "CSV file with the observations")->required();
  test->add_option("--stat", tst.stat, "statistic: tn, vn, or maxbet")->required();
  test->add_option("--d", tst.d, "grid points per axis, of the form 2^(s+1)-1")
      ->capture_default_str();
  test->add_option("--t-frac", tst.t_frac, "trim fraction of the averaged maxima")
      ->capture_default_str();
  test->add_option("--runs", tst.runs, "Monte Carlo replicates")->capture_default_str();
  test->add_option("--seed", tst.seed, "master seed")->capture_default_str();
  add_cols_option(test, tst.cols);
  test->add_option("--cache-dir", tst.cache_dir,
                   "cache directory (QDEP_CACHE_DIR overrides)");
  test->add_option("--threads", tst.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  test->callback([&] { run_test(tst); });

  PowerOpts pow;
  CLI::App* power_cmd = app.add_subcommand("power", "empirical power of a test on a model");
  power_cmd->add_option("--model", pow.model, "model code, e.g. SR3 or FRECHET(0.3)")
      ->required();
  power_cmd->add_option("--stat", pow.stat, "statistic: tn, vn, or maxbet")
      ->capture_default_str();
  power_cmd->add_option("--n", pow.n, "sample size")->required();
  power_cmd->add_option("--d", pow.d, "grid points per axis, of the form 2^(s+1)-1")
      ->capture_default_str();
  power_cmd->add_option("--t-frac", pow.t_frac, "trim fraction of the averaged maxima")
      ->capture_default_str();
  power_cmd->add_option("--alpha", pow.alpha, "test level")->capture_default_str();
  power_cmd->add_option("--reps", pow.reps, "model replicates")->capture_default_str();
  power_cmd->add_option("--runs", pow.runs, "Monte Carlo replicates for the null sample")
      ->capture_default_str();
  power_cmd->add_option("--seed", pow.seed, "master seed")->capture_default_str();
  power_cmd->add_option("--cache-dir", pow.cache_dir,
                        "cache directory (QDEP_CACHE_DIR overrides)");
  power_cmd->add_option("--threads", pow.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  power_cmd->callback([&] { run_power(pow); });

  BetOpts bet;
  CLI::App* bet_cmd = app.add_subcommand(
      "bet", "depth-2 binary expansion symmetry statistics on a CSV data set");
  bet_cmd->add_option("--input", bet.input, "CSV file with the observations")
      ->required();
  bet_cmd->add_option("--runs", bet.runs, "Monte Carlo replicates")
      ->capture_default_str();
  bet_cmd->add_option("--seed", bet.seed, "master seed")->capture_default_str();
  add_cols_option(bet_cmd, bet.cols);
  bet_cmd->add_option("--cache-dir", bet.cache_dir,
                      "cache directory (QDEP_CACHE_DIR overrides)");
  bet_cmd->add_option("--out-dir", bet.out_dir, "output directory for --svg")
      ->capture_default_str();
  bet_cmd->add_flag("--svg", bet.svg, "render the symmetry overlay bet.svg");
  bet_cmd->add_option("--threads", bet.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
  bet_cmd->callback([&] { run_bet(bet); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
