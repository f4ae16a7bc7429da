#include "iep/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "iep/parallel.hpp"
#include "counting.hpp"

namespace iep {

WeightFunction::WeightFunction(std::string name, std::function<double(double)> rule,
                               bool symmetric)
    : name_(std::move(name)), rule_(std::move(rule)), symmetric_(symmetric) {}

WeightFunction WeightFunction::loglog() {
  return WeightFunction(
      "loglog",
      [](double t) {
        const double x = t * (1.0 - t);
        return std::sqrt(x * std::log(std::log(1.0 / x)));
      },
      true);
}

double weight_eval(const WeightFunction& w, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("weight argument outside (0, 1)");
  const double value = w(t);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::domain_error("weight '" + w.name() + "' is not positive at " + std::to_string(t));
  }
  return value;
}

WeightIntegral weight_integral(const WeightFunction& w, double eps, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("weight_integral needs tol > 0");
  if (!(eps > 0.0)) throw std::domain_error("weight_integral needs eps > 0");
  const auto integrand = [&](double s) {
    const double x = s * (1.0 - s);
    const double v = w(s);
    return std::exp(-eps * v * v / x) / x;
  };
  const auto integrate = [&](double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, tol);
  };
  WeightIntegral result{true, integrate(0.0625, 0.9375), {}};
  for (int j = 5; j <= 20; ++j) {
    const double inner = std::ldexp(1.0, -j);
    const double outer = std::ldexp(1.0, -(j - 1));
    const double increment = integrate(inner, outer) + integrate(1.0 - outer, 1.0 - inner);
    if (j >= 12) {
      const double previous = result.increments.back();
      if (previous > 0.0 && increment / previous > 0.95) result.finite = false;
    }
    result.increments.push_back(increment);
    result.value += increment;
  }
  return result;
}

namespace {

// Double sup over k and t of |tilde-alpha_n(k / n, t)| / weight(k), k = 1..n-1.
template <class Weight>
CpSup contrast_sup(const Sample& sample, Weight weight) {
  const std::size_t n = sample.size();
  const auto sorted = sample.sorted();
  std::vector<double> points;
  std::vector<std::size_t> below;  // cumulative count at each distinct point
  for (std::size_t i = 0; i < n; ++i) {
    if (!points.empty() && points.back() == sorted[i]) {
      below.back() = i + 1;
    } else {
      points.push_back(sorted[i]);
      below.push_back(i + 1);
    }
  }
  std::vector<std::size_t> first(points.size(), 0);
  CpSup best{0.0, 0, points.front()};
  const double scale = std::pow(static_cast<double>(n), -1.5);
  const auto data = sample.observations();
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t rank = static_cast<std::size_t>(
        std::lower_bound(points.begin(), points.end(), data[k - 1]) - points.begin());
    for (std::size_t j = rank; j < points.size(); ++j) ++first[j];
    const double factor =
        static_cast<double>(k) * static_cast<double>(n - k) * scale / weight(k);
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double diff = detail::integrated_count(first[j], k) - detail::integrated_count(below[j] - first[j], n - k);
      const double value = factor * std::abs(diff);
      if (value > best.value) best = {value, k, points[j]};
    }
  }
  return best;
}

}  // namespace

double cp_process(const Sample& sample, double s, double t) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("cp_process needs s in [0, 1]");
  const std::size_t n = sample.size();
  const std::size_t k = detail::floor_ns(n, s);
  if (k == 0 || k == n) return 0.0;
  const auto data = sample.observations();
  std::size_t left = 0;
  std::size_t right = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i] <= t) ++(i < k ? left : right);
  }
  const double factor = static_cast<double>(k) * static_cast<double>(n - k) *
                        std::pow(static_cast<double>(n), -1.5);
  return factor * (detail::integrated_count(left, k) - detail::integrated_count(right, n - k));
}

CpSup tau(const Sample& sample) {
  return contrast_sup(sample, [](std::size_t) { return 1.0; });
}

CpSup tau_weighted(const Sample& sample, const WeightFunction& w) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::domain_error("weighted change-point statistic needs n >= 2");
  std::vector<double> weights(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    weights[k] = weight_eval(w, static_cast<double>(k) / static_cast<double>(n));
  }
  return contrast_sup(sample, [&](std::size_t k) { return weights[k]; });
}

double psi_n(double s, double t, std::size_t n) {
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("psi_n needs s, t in [0, 1]");
  }
  const auto fl = [n](double x) { return static_cast<double>(detail::floor_ns(n, x)); };
  const double h2 = 2.0 * fl(0.5);
  if (s <= 0.5 && t <= 0.5) {
    return fl(std::min(s, t)) - s * fl(t) - t * fl(s) + h2 * s * t;
  }
  if (s >= 0.5 && t >= 0.5) {
    return fl(1.0 - std::max(s, t)) - (1.0 - s) * fl(1.0 - t) - (1.0 - t) * fl(1.0 - s) +
           h2 * (1.0 - s) * (1.0 - t);
  }
  if (s <= 0.5) return s * fl(1.0 - t) + (1.0 - t) * fl(s) - h2 * s * (1.0 - t);
  return (1.0 - s) * fl(t) + t * fl(1.0 - s) - h2 * (1.0 - s) * t;
}

GaussianSheet build_tied_down_approximant(std::size_t n, const Grid& grid_s, const Grid& grid_u,
                                          Seed seed) {
  if (n < 2) throw std::domain_error("approximant needs n >= 2");
  const std::size_t h = n / 2;
  const GaussianSheet k1 = sample_kiefer(h, grid_u, derive_seed(seed, 1));
  const GaussianSheet k2 = sample_kiefer(h, grid_u, derive_seed(seed, 2));
  const std::size_t width = grid_u.size();
  GaussianSheet sheet{std::vector<double>(grid_s.points().begin(), grid_s.points().end()), grid_u,
                      std::vector<double>(grid_s.size() * width, 0.0)};
  const double root = std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < grid_s.size(); ++j) {
    const double s = grid_s[j];
    for (std::size_t k = 0; k < width; ++k) {
      const double ends = k1.at(h, k) + k2.at(h, k);
      const double value = s <= 0.5 ? k2.at(detail::floor_ns(n, s), k) - s * ends
                                    : -k1.at(detail::floor_ns(n, 1.0 - s), k) + (1.0 - s) * ends;
      sheet.at(j, k) = value / root;
    }
  }
  return sheet;
}

GaussianSheet build_cp_approximant(std::size_t n, const Grid& grid_s, const Grid& grid_u,
                                   Seed seed) {
  return weight_path(build_tied_down_approximant(n, grid_s, grid_u, seed));
}

std::vector<double> simulate_cp_limit(const Grid& grid_s, const Grid& grid_u, std::size_t reps,
                                      Seed seed, const std::optional<WeightFunction>& w,
                                      std::size_t threads) {
  std::vector<double> weights(grid_s.size(), 1.0);
  if (w) {
    for (std::size_t j = 1; j + 1 < grid_s.size(); ++j) weights[j] = weight_eval(*w, grid_s[j]);
  }
  return parallel_map(reps, threads, [&](std::size_t r) {
    const GaussianSheet sheet = sample_tied_down_kiefer(grid_s, grid_u, derive_seed(seed, r));
    double sup = 0.0;
    for (std::size_t j = 1; j + 1 < grid_s.size(); ++j) {
      for (std::size_t k = 1; k + 1 < grid_u.size(); ++k) {
        sup = std::max(sup, std::abs(grid_u[k] * sheet.at(j, k)) / weights[j]);
      }
    }
    return sup;
  });
}

NullDistribution cp_null(const CpOptions& options) {
  if (options.reps == 0) throw std::invalid_argument("reps must be positive");
  const Grid grid = Grid::dyadic(options.grid_depth);
  std::optional<WeightFunction> w;
  if (options.weighted) w = WeightFunction::loglog();
  return NullDistribution(simulate_cp_limit(grid, grid, options.reps, options.seed, w, options.threads));
}

unsigned cp_grid_depth(std::size_t n) {
  unsigned depth = 6;
  while (depth < 10 && (std::size_t{1} << depth) < n) ++depth;
  return depth;
}

ChangePointReport cp_test(const Sample& sample, const CpOptions& options) {
  if (options.weighted && sample.size() < 4) {
    throw std::domain_error("weighted change-point test needs n >= 4");
  }
  return cp_test(sample, options, cp_null(options));
}

ChangePointReport cp_test(const Sample& sample, const CpOptions& options,
                          const NullDistribution& null) {
  const std::size_t n = sample.size();
  if (options.weighted && n < 4) throw std::domain_error("weighted change-point test needs n >= 4");
  const CpSup sup = options.weighted ? tau_weighted(sample, WeightFunction::loglog()) : tau(sample);
  ChangePointReport report;
  report.statistic = options.weighted ? "tau_weighted" : "tau";
  report.value = sup.value;
  report.p_value = null.p_value(sup.value);
  for (double level : kReportLevels) report.critical_values[level] = null.critical_value(level);
  report.k_hat = sup.k;
  report.s_hat = static_cast<double>(sup.k) / static_cast<double>(n);
  report.t_hat = sup.t;
  report.n = n;
  report.reps = null.reps();
  report.seed = options.seed;
  report.grid_intervals = std::size_t{1} << options.grid_depth;
  if (null.reps() < 1000) {
    report.warnings.push_back("fewer than 1000 null replicates; p-value resolution is coarse");
  }
  return report;
}

}  // namespace iep
