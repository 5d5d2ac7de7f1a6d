#include "qdep/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <thread>
#include <utility>

#include "qdep/bet.hpp"
#include "qdep/copula.hpp"
#include "qdep/errors.hpp"
#include "qdep/random.hpp"
#include "qdep/surface.hpp"
#include "qdep/text_util.hpp"

namespace qdep {

namespace {

constexpr const char* kModelNames[] = {
    "NULL", "FRECHET", "SR1", "SR2", "SR3", "SR4", "SR5", "HR1", "HR2",
    "RE1", "RE2", "RE3", "RE4", "BM1", "BM2", "BM3", "BM4", "BM5",
    "BM6", "BM7", "BM8", "BM9", "BM10", "BM11"};

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

// CDF of a*C + b*G for a standard Cauchy C independent of a standard normal
// G. Composite Simpson over the substitution c = tan(theta) on (-pi/2, pi/2);
// the integrand is smooth and flat at both endpoints, so 1024 panels put the
// quadrature error far below 1e-9.
double cauchy_normal_sum_cdf(double x, double a, double b) {
  constexpr int kPanels = 1024;
  const double half_pi = std::numbers::pi / 2.0;
  const double h = std::numbers::pi / kPanels;
  double sum = 0.0;
  for (int i = 0; i <= kPanels; ++i) {
    const double theta = -half_pi + i * h;
    const double weight =
        (i == 0 || i == kPanels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * normal_cdf((x - a * std::tan(theta)) / b);
  }
  return sum * h / (3.0 * std::numbers::pi);
}

// One draw of each primitive, with zero-probability degenerate values
// rejected so downstream divisions stay finite.
double nonzero_normal(RandomStream& rng) {
  double z = rng.next_normal();
  while (z == 0.0) z = rng.next_normal();
  return z;
}

double positive_exponential(RandomStream& rng) {
  double e = rng.next_exponential();
  while (e == 0.0) e = rng.next_exponential();
  return e;
}

// Standard bivariate Cauchy with unit correlation matrix: a standard normal
// pair divided by an independent |N(0,1)| (chi with 1 df).
std::pair<double, double> bivariate_cauchy(RandomStream& rng) {
  const double z0 = std::fabs(nonzero_normal(rng));
  const double z1 = rng.next_normal();
  const double z2 = rng.next_normal();
  return {z1 / z0, z2 / z0};
}

// One-sided alpha-stable variable with Laplace transform exp(-t^alpha),
// alpha in (0,1), by the Chambers-Mallows-Stuck representation.
double positive_stable(double alpha, RandomStream& rng) {
  double u = rng.next_double();
  while (u == 0.0) u = rng.next_double();
  const double angle = std::numbers::pi * u;
  const double w = positive_exponential(rng);
  return std::sin(alpha * angle) / std::pow(std::sin(angle), 1.0 / alpha) *
         std::pow(std::sin((1.0 - alpha) * angle) / w, (1.0 - alpha) / alpha);
}

[[noreturn]] void throw_not_implemented(const char* name, const char* detail) {
  throw NotImplementedError(
      std::string(name) + " (" + detail +
      ") is not implemented; the defining parameterization is given in "
      "Cmiel & Ledwina (2020), Validation of association, Insurance: "
      "Mathematics and Economics 91, 55-67");
}

}  // namespace

ModelSpec ModelSpec::parse(const std::string& text) {
  std::string upper;
  upper.reserve(text.size());
  for (char c : std::string(trim_view(text))) {
    upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (upper.rfind("FRECHET(", 0) == 0 && upper.back() == ')') {
    const auto theta = parse_double(upper.substr(8, upper.size() - 9));
    if (!theta || !(*theta >= 0.0 && *theta <= 1.0)) {
      throw ConfigError("FRECHET needs a mixture weight in [0,1], got '" + text + "'");
    }
    return {ModelId::Frechet, *theta};
  }
  for (std::size_t i = 0; i < std::size(kModelNames); ++i) {
    if (upper == kModelNames[i] && static_cast<ModelId>(i) != ModelId::Frechet) {
      ModelSpec spec{static_cast<ModelId>(i), 0.0};
      if (spec.id == ModelId::BM6) spec.theta = 0.5;
      if (spec.id == ModelId::BM7) spec.theta = 1.2;
      return spec;
    }
  }
  throw ConfigError("unknown model '" + text +
                    "' (expected SR1-SR5, HR1-HR2, RE1-RE4, BM1-BM11, NULL, "
                    "or FRECHET(theta))");
}

std::string ModelSpec::name() const {
  if (id == ModelId::Frechet) return "FRECHET(" + format_double(theta) + ")";
  return kModelNames[static_cast<std::size_t>(id)];
}

Sample generate(const ModelSpec& model, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample size must be positive");
  RandomStream rng = RandomStream::substream(
      seed, StreamDomain::Generator, static_cast<std::uint64_t>(model.id));

  Sample out;
  out.columns.assign(2, std::vector<double>(static_cast<std::size_t>(n)));
  out.labels = {"x", "y"};
  auto& xs = out.columns[0];
  auto& ys = out.columns[1];

  for (int i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0;
    switch (model.id) {
      case ModelId::Null:
        x = rng.next_double();
        y = rng.next_double();
        break;
      case ModelId::Frechet: {
        x = rng.next_double();
        const bool comonotone = rng.next_double() < model.theta;
        y = comonotone ? x : 1.0 - x;
        break;
      }
      case ModelId::SR1:
        x = rng.next_double();
        y = 2.0 + x + rng.next_normal();
        break;
      case ModelId::SR2:
        x = rng.next_double();
        y = std::pow(x, 0.25) + 0.5 * rng.next_normal();
        break;
      case ModelId::SR3:
        x = rng.next_double();
        y = (x <= 0.5 ? 1.0 : 0.0) + std::sqrt(2.0) * rng.next_normal();
        break;
      case ModelId::SR4:
        x = rng.next_normal();
        y = std::log1p(std::fabs(x)) + rng.next_normal();
        break;
      case ModelId::SR5: {
        x = rng.next_double();
        const double bump = (2.0 * x - 1.0) * (2.0 * x - 1.0) - 0.5;
        y = 4.0 * bump * bump + std::sqrt(0.5) * rng.next_normal();
        break;
      }
      case ModelId::HR1:
        x = 10.0 * positive_exponential(rng);  // exponential with rate 0.1
        y = std::sqrt(1.0 + 1.0 / (x * x)) * rng.next_normal();
        break;
      case ModelId::HR2:
        x = 1.0 + 15.0 * rng.next_double();
        y = std::sqrt(x) * rng.next_normal();
        break;
      case ModelId::RE1:
        x = rng.next_double();
        y = 2.0 + x + 2.0 * rng.next_normal() * x + rng.next_normal();
        break;
      case ModelId::RE2:
        x = rng.next_double();
        y = rng.next_normal() * (2.0 + x + x * x) + rng.next_normal();
        break;
      case ModelId::RE3:
        x = rng.next_open();
        y = rng.next_normal() / x + rng.next_normal();
        break;
      case ModelId::RE4: {
        const auto [x0, y0] = bivariate_cauchy(rng);
        x = x0;
        y = rng.next_normal() * y0 + rng.next_normal();
        break;
      }
      case ModelId::BM1:
        x = rng.next_normal();
        y = 0.3 * x + std::sqrt(1.0 - 0.09) * rng.next_normal();
        break;
      case ModelId::BM2:
        if (rng.next_double() < 0.1) {
          x = rng.next_normal();
          y = rng.next_normal();
        } else {
          const double z1 = rng.next_normal();
          const double z2 = rng.next_normal();
          x = std::sqrt(6.0) * z1;
          y = 5.0 / std::sqrt(6.0) * z1 + std::sqrt(6.0 - 25.0 / 6.0) * z2;
        }
        break;
      case ModelId::BM3: {
        // Weighted sum of the component vectors, not a distribution mixture:
        // the marginals are Cauchy-normal convolutions.
        const auto [cx, cy] = bivariate_cauchy(rng);
        x = 0.3 * cx + 0.7 * rng.next_normal();
        y = 0.3 * cy + 0.7 * rng.next_normal();
        break;
      }
      case ModelId::BM4:
        x = rng.next_normal();
        y = (std::fabs(x) <= 1.96 ? 0.0 : -x) + rng.next_normal();
        break;
      case ModelId::BM5:
        throw_not_implemented("BM5", "Mai-Scherer copula, parameters (0.92, 0.08)");
      case ModelId::BM6: {
        // Joint survival exp(-x - y - theta*x*y): given X = x, the conditional
        // survival of Y is (1 + theta*y) exp(-y(1 + theta*x)), realized as a
        // two-component exponential mixture.
        const double theta = model.theta;
        x = positive_exponential(rng);
        const double rate = 1.0 + theta * x;
        const bool heavy = rng.next_double() < theta / rate;
        double sum = positive_exponential(rng);
        if (heavy) sum += positive_exponential(rng);
        y = sum / rate;
        break;
      }
      case ModelId::BM7: {
        // Archimedean sampling: U_k = psi(E_k / V) with psi(t) = exp(-t^(1/theta))
        // and V positive stable with index 1/theta.
        const double alpha = 1.0 / model.theta;
        const double v = positive_stable(alpha, rng);
        const double e1 = positive_exponential(rng);
        const double e2 = positive_exponential(rng);
        x = std::exp(-std::pow(e1 / v, alpha));
        y = std::exp(-std::pow(e2 / v, alpha));
        break;
      }
      case ModelId::BM8: {
        const auto [cx, cy] = bivariate_cauchy(rng);
        x = cx;
        y = cy;
        break;
      }
      case ModelId::BM9: {
        // Symmetric Student with 2 df: normal pair over sqrt(chi^2_2 / 2),
        // and chi^2_2 / 2 is a unit exponential.
        const double denom = std::sqrt(positive_exponential(rng));
        x = rng.next_normal() / denom;
        y = rng.next_normal() / denom;
        break;
      }
      case ModelId::BM10:
        throw_not_implemented(
            "BM10", "skew bivariate Student, 5 df, parameters (0.3, 0.7, -0.7)");
      case ModelId::BM11:
        throw_not_implemented("BM11", "bivariate sub-Gaussian, parameters (0.1, 1.5)");
    }
    xs[static_cast<std::size_t>(i)] = x;
    ys[static_cast<std::size_t>(i)] = y;
  }
  return out;
}

double x_margin_cdf(const ModelSpec& model, double x) {
  const auto uniform01 = [](double t) { return std::clamp(t, 0.0, 1.0); };
  switch (model.id) {
    case ModelId::Null:
    case ModelId::Frechet:
    case ModelId::SR1:
    case ModelId::SR2:
    case ModelId::SR3:
    case ModelId::SR5:
    case ModelId::RE1:
    case ModelId::RE2:
    case ModelId::RE3:
    case ModelId::BM7:
      return uniform01(x);
    case ModelId::SR4:
    case ModelId::BM1:
    case ModelId::BM4:
      return normal_cdf(x);
    case ModelId::HR1:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-0.1 * x);
    case ModelId::HR2:
      return uniform01((x - 1.0) / 15.0);
    case ModelId::RE4:
    case ModelId::BM8:
      return cauchy_cdf(x);
    case ModelId::BM2:
      return 0.1 * normal_cdf(x) + 0.9 * normal_cdf(x / std::sqrt(6.0));
    case ModelId::BM3:
      return cauchy_normal_sum_cdf(x, 0.3, 0.7);
    case ModelId::BM6:
      return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x);
    case ModelId::BM9:
      // Student CDF with 2 df in closed form.
      return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x));
    case ModelId::BM5:
      throw_not_implemented("BM5", "Mai-Scherer copula, parameters (0.92, 0.08)");
    case ModelId::BM10:
      throw_not_implemented(
          "BM10", "skew bivariate Student, 5 df, parameters (0.3, 0.7, -0.7)");
    case ModelId::BM11:
      throw_not_implemented("BM11", "bivariate sub-Gaussian, parameters (0.1, 1.5)");
  }
  throw ConfigError("unknown model id");
}

double ks_statistic_x_margin(const ModelSpec& model, int n, std::uint64_t seed) {
  Sample sample = generate(model, n, seed);
  std::vector<double>& xs = sample.columns[0];
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = x_margin_cdf(model, xs[static_cast<std::size_t>(i)]);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

PowerEstimate power(const ModelSpec& model, StatKind kind, const NullSample& null,
                    double alpha, int reps, std::uint64_t master_seed, int threads) {
  if (null.kind != kind) {
    throw ConfigError("null sample holds " + stat_kind_name(null.kind) +
                      ", requested " + stat_kind_name(kind));
  }
  if (reps < 1) throw ConfigError("power needs reps >= 1");
  const double cv = critical_value(null, alpha);
  const int n = null.config.n;
  const DyadicGrid grid = DyadicGrid::from_depth(null.config.s);
  const double t_frac = null.config.t_frac;

  std::vector<std::uint8_t> rejected(static_cast<std::size_t>(reps), 0);
  const auto worker = [&](int begin, int end) {
    std::vector<double> scratch;
    for (int r = begin; r < end; ++r) {
      const std::uint64_t rep_seed = substream_seed(
          master_seed, StreamDomain::PowerReplicate, static_cast<std::uint64_t>(r));
      const Sample sample = generate(model, n, rep_seed);
      const PseudoSample pseudo = pseudo_observations(sample, rep_seed);
      double stat = 0.0;
      if (kind == StatKind::MaxBet) {
        stat = max_bet_statistic(symmetry_statistics(pseudo));
      } else {
        const CheckerboardCopula cop = CheckerboardCopula::from_pseudo(pseudo);
        const QSurface surface = q_surface(cop, grid);
        stat = kind == StatKind::Tn
                   ? t_stat_from_values(surface.q, surface.scale, t_frac, scratch)
                   : v_stat_from_values(surface.q, surface.scale);
      }
      rejected[static_cast<std::size_t>(r)] = stat > cv ? 1 : 0;
    }
  };

  int pool_size = threads > 0
                      ? threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  pool_size = std::min(pool_size, reps);
  if (pool_size <= 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(pool_size));
    for (int t = 0; t < pool_size; ++t) {
      const int begin = static_cast<int>(static_cast<std::int64_t>(reps) * t / pool_size);
      const int end =
          static_cast<int>(static_cast<std::int64_t>(reps) * (t + 1) / pool_size);
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  PowerEstimate out;
  out.model = model;
  out.kind = kind;
  out.config = null.config;
  out.alpha = alpha;
  out.reps = reps;
  int count = 0;
  for (std::uint8_t f : rejected) count += f;
  out.power = static_cast<double>(count) / reps;
  out.mc_se = std::sqrt(out.power * (1.0 - out.power) / reps);
  return out;
}

}  // namespace qdep
