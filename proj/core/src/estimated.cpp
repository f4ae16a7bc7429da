#include "iep/estimated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "iep/coupling.hpp"
#include "iep/errors.hpp"
#include "iep/parallel.hpp"
#include "iep/summary.hpp"
#include "counting.hpp"

namespace iep {

double ExponentialFamily::cdf(double t, double theta) const {
  return t <= 0.0 ? 0.0 : -std::expm1(-theta * t);
}

double ExponentialFamily::cdf_gradient(double t, double theta) const {
  if (t <= 0.0 || !std::isfinite(t)) return 0.0;
  return t * std::exp(-theta * t);
}

double ExponentialFamily::quantile(double u, double theta) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  if (u == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / theta;
}

double ExponentialFamily::influence(double x, double theta0) const {
  return theta0 - theta0 * theta0 * x;
}

double ExponentialFamily::score_transform(double s, double theta0) const {
  return theta0 * (1.0 + std::log1p(-s));
}

double ExponentialFamily::information(double theta0) const { return theta0 * theta0; }

void ExponentialFamily::validate(const Sample& sample) const {
  for (double x : sample.observations()) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw DataError("exponential family needs finite nonnegative observations");
    }
  }
  if (sample.sorted().back() <= 0.0) throw DataError("exponential family needs a positive mean");
}

double ExponentialFamily::estimate(const Sample& sample) const {
  validate(sample);
  return 1.0 / mean(sample.observations());
}

DistributionModel ExponentialFamily::model(double theta) const {
  return DistributionModel::exponential(theta);
}

NormalMeanFamily::NormalMeanFamily(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::domain_error("sigma must be positive");
}

double NormalMeanFamily::cdf(double t, double theta) const {
  return 0.5 * std::erfc(-(t - theta) / (sigma_ * std::numbers::sqrt2));
}

double NormalMeanFamily::cdf_gradient(double t, double theta) const {
  if (!std::isfinite(t)) return 0.0;
  const double z = (t - theta) / sigma_;
  return -std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
}

double NormalMeanFamily::quantile(double u, double theta) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::normal_distribution<>(theta, sigma_), u);
}

double NormalMeanFamily::influence(double x, double theta0) const { return x - theta0; }

double NormalMeanFamily::score_transform(double s, double) const {
  if (s <= 0.0) return -std::numeric_limits<double>::infinity();
  if (s >= 1.0) return std::numeric_limits<double>::infinity();
  return sigma_ * boost::math::quantile(boost::math::normal_distribution<>(), s);
}

double NormalMeanFamily::information(double) const { return sigma_ * sigma_; }

void NormalMeanFamily::validate(const Sample& sample) const {
  for (double x : sample.observations()) {
    if (!std::isfinite(x)) throw DataError("normal-mean family needs finite observations");
  }
}

double NormalMeanFamily::estimate(const Sample& sample) const {
  validate(sample);
  return mean(sample.observations());
}

DistributionModel NormalMeanFamily::model(double theta) const {
  return DistributionModel::normal(theta, sigma_);
}

std::unique_ptr<ParametricFamily> exp_family(double theta0) {
  if (!(theta0 > 0.0) || !std::isfinite(theta0)) throw std::domain_error("theta0 must be positive");
  return std::make_unique<ExponentialFamily>();
}

std::unique_ptr<ParametricFamily> parse_family(const std::string& name) {
  if (name == "exp") return std::make_unique<ExponentialFamily>();
  if (name == "normal-mean") return std::make_unique<NormalMeanFamily>();
  throw UsageError("unknown family '" + name + "' (expected exp or normal-mean)");
}

void check_parameter(const ParametricFamily& family, double theta) {
  if (!std::isfinite(theta)) throw std::domain_error("parameter must be finite");
  if (family.name() == "exp" && !(theta > 0.0)) throw std::domain_error("theta must be positive");
}

double estimated_process(const Sample& sample, const ParametricFamily& family, double t) {
  const double theta = family.estimate(sample);
  const double f = family.cdf(t, theta);
  const double n = static_cast<double>(sample.size());
  return std::sqrt(n) * (detail::integrated_count(sample.count_at_or_below(t), sample.size()) - f * f / 2.0);
}

HnTerms estimated_decomposition(const Sample& sample, const ParametricFamily& family, double t) {
  const double theta = family.estimate(sample);
  const double n = static_cast<double>(sample.size());
  const double root = std::sqrt(n);
  const double fn = static_cast<double>(sample.count_at_or_below(t)) / n;
  const double f = family.cdf(t, theta);
  const double alpha = root * (fn - f);
  return {f * alpha, alpha * alpha / (2.0 * root), fn / (2.0 * root)};
}

double estimated_sup(const Sample& sample, const ParametricFamily& family) {
  return ks_integrated(sample, family.model(family.estimate(sample)));
}

double stochastic_integral(const ParametricFamily& family, double theta0, const Grid& grid,
                           std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("path does not match the grid");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double c = family.score_transform(grid[k], theta0);
    if (std::isfinite(c)) sum += c * (values[k + 1] - values[k]);
  }
  return sum;
}

double discretized_integral_variance(const ParametricFamily& family, double theta0,
                                     const Grid& grid) {
  double square = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double c = family.score_transform(grid[k], theta0);
    if (!std::isfinite(c)) continue;
    const double du = grid[k + 1] - grid[k];
    square += c * c * du;
    first += c * du;
  }
  return square - first * first;
}

unsigned refine_integral_depth(const ParametricFamily& family, double theta0, unsigned min_depth,
                               unsigned max_depth) {
  if (min_depth > max_depth) throw std::invalid_argument("min_depth above max_depth");
  double previous = discretized_integral_variance(family, theta0, Grid::dyadic(min_depth));
  for (unsigned depth = min_depth + 1; depth <= max_depth; ++depth) {
    const double current = discretized_integral_variance(family, theta0, Grid::dyadic(depth));
    if (std::abs(current - previous) < 0.01 * std::abs(previous)) return depth;
    previous = current;
  }
  return max_depth;
}

namespace {

// Linear interpolation of grid values at v in [0, 1].
double interpolate(const Grid& grid, std::span<const double> values, double v) {
  const auto points = grid.points();
  const auto upper = std::upper_bound(points.begin(), points.end(), v);
  if (upper == points.begin()) return values.front();
  if (upper == points.end()) return values.back();
  const std::size_t k = static_cast<std::size_t>(upper - points.begin());
  const double a = points[k - 1];
  const double b = points[k];
  return values[k - 1] + (values[k] - values[k - 1]) * (v - a) / (b - a);
}

// Shared construction of G_n (theta = theta0) and hat-G_n (theta = theta_hat).
ApproximantPath approximant(const ParametricFamily& family, double theta0, double theta,
                            std::size_t n, const Grid& grid_u, Seed seed) {
  if (n == 0) throw std::invalid_argument("approximant needs n >= 1");
  check_parameter(family, theta0);
  check_parameter(family, theta);
  RandomStream rng(seed);
  const double size = static_cast<double>(n);
  const double times[] = {size};
  const GaussianSheet sheet = sample_kiefer_at(times, grid_u, rng);
  const double root = std::sqrt(size);

  ApproximantPath path{grid_u, {}, {}, {}, {}, 0.0, theta, n};
  path.kiefer.resize(grid_u.size());
  for (std::size_t k = 0; k < grid_u.size(); ++k) path.kiefer[k] = sheet.at(0, k) / root;
  path.w = stochastic_integral(family, theta0, grid_u, path.kiefer);
  path.t.resize(grid_u.size());
  path.g.resize(grid_u.size());
  path.gbar.resize(grid_u.size());
  for (std::size_t k = 0; k < grid_u.size(); ++k) {
    const double t = family.quantile(grid_u[k], theta0);
    const double f = family.cdf(t, theta);
    path.t[k] = t;
    path.g[k] = interpolate(grid_u, path.kiefer, f) - path.w * family.cdf_gradient(t, theta);
    path.gbar[k] = f * path.g[k];
  }
  return path;
}

}  // namespace

ApproximantPath gbar_path(const ParametricFamily& family, double theta0, std::size_t n,
                          const Grid& grid_u, Seed seed) {
  return approximant(family, theta0, theta0, n, grid_u, seed);
}

ApproximantPath ghat_path(const ParametricFamily& family, double theta0, double theta_hat,
                          std::size_t n, const Grid& grid_u, Seed seed) {
  return approximant(family, theta0, theta_hat, n, grid_u, seed);
}

double sup_g_distance(const ApproximantPath& a, const ApproximantPath& b) {
  if (a.gbar.size() != b.gbar.size()) throw std::invalid_argument("paths on different grids");
  double sup = 0.0;
  for (std::size_t k = 0; k < a.gbar.size(); ++k) sup = std::max(sup, std::abs(a.gbar[k] - b.gbar[k]));
  return sup;
}

RateReport epsilon_bar_experiment(const ParametricFamily& family, double theta0,
                                  const std::vector<std::size_t>& n_list, std::size_t reps,
                                  Seed seed, std::size_t threads) {
  check_parameter(family, theta0);
  if (reps == 0) throw std::invalid_argument("reps must be positive");
  RateReport report;
  report.experiment = "estimated";
  report.metadata["family"] = family.name();
  report.metadata["reps"] = std::to_string(reps);
  report.metadata["seed"] = std::to_string(seed);
  report.metadata["theta0"] = format_real(theta0);
  report.metadata["normalization"] = "sqrt(n)/log(n)";
  for (std::size_t n : n_list) {
    if (n < 2) throw std::invalid_argument("epsilon_bar_experiment needs n >= 2");
    const unsigned depth = std::min(default_depth(n), 20u);
    const Seed root = derive_seed(seed, n);
    std::vector<double> values = parallel_map(reps, threads, [&](std::size_t r) {
      const CoupledPair pair = dyadic_coupled_pair(n, depth, derive_seed(root, r));
      std::vector<double> xs(n);
      for (std::size_t i = 0; i < n; ++i) xs[i] = family.quantile(pair.uniforms[i], theta0);
      const Sample sample(std::move(xs));
      const double theta_hat = family.estimate(sample);
      const Grid& grid = pair.bridge.grid;
      const auto& bridge = pair.bridge.values;
      const double w = stochastic_integral(family, theta0, grid, bridge);
      const double root_n = std::sqrt(static_cast<double>(n));
      double sup = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double u = grid[k];
        const double t = family.quantile(u, theta0);
        const double f_hat = family.cdf(t, theta_hat);
        const double alpha_bar =
            root_n * (detail::integrated_count(sample.count_at_or_below(t), n) - f_hat * f_hat / 2.0);
        const double g_bar = u * (bridge[k] - w * family.cdf_gradient(t, theta0));
        sup = std::max(sup, std::abs(alpha_bar - g_bar));
      }
      return sup;
    });
    const double scale = std::sqrt(static_cast<double>(n)) / std::log(static_cast<double>(n));
    std::vector<double> normalized(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) normalized[r] = values[r] * scale;
    const Quartiles q = quartiles(values);
    report.rows.push_back({n, q.median, q.q25, q.q75, median(normalized)});
  }
  return report;
}

std::vector<double> simulate_estimated_null(const ParametricFamily& family, double theta,
                                            const Grid& grid, std::size_t reps, Seed seed,
                                            std::size_t threads) {
  check_parameter(family, theta);
  std::vector<double> gradient(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gradient[k] = family.cdf_gradient(family.quantile(grid[k], theta), theta);
  }
  return parallel_map(reps, threads, [&](std::size_t r) {
    const GridPath b = sample_bridge(grid, derive_seed(seed, r));
    const double w = stochastic_integral(family, theta, grid, b.values);
    double sup = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      sup = std::max(sup, std::abs(grid[k] * (b.values[k] - w * gradient[k])));
    }
    return sup;
  });
}

EstimatedReport estimated_test(const Sample& sample, const ParametricFamily& family,
                               const EstimatedOptions& options) {
  if (options.reps == 0) throw UsageError("reps must be positive");
  const double theta_hat = family.estimate(sample);
  EstimatedReport report;
  report.family = family.name();
  report.theta_hat = theta_hat;
  report.test.statistic = "integrated-estimated-ks";
  report.test.value = ks_integrated(sample, family.model(theta_hat));
  report.test.n = sample.size();
  report.test.seed = options.seed;
  report.test.grid_intervals = std::size_t{1} << options.grid_depth;
  const Grid grid = Grid::dyadic(options.grid_depth);
  calibrate(report.test, NullDistribution(simulate_estimated_null(
                             family, theta_hat, grid, options.reps, options.seed, options.threads)));
  return report;
}

}  // namespace iep
