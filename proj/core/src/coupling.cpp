#include "iep/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include "iep/empirical.hpp"
#include "iep/parallel.hpp"
#include "iep/summary.hpp"

namespace iep {

namespace {

// Largest m for which the lower tail is summed term by term; 2^-m stays a
// normal double up to m = 1022.
constexpr std::uint64_t kDirectLimit = 1000;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double boost_cdf(std::uint64_t m, std::int64_t k) {
  if (k < 0) return 0.0;
  if (static_cast<std::uint64_t>(k) >= m) return 1.0;
  return boost::math::cdf(boost::math::binomial_distribution<>(static_cast<double>(m), 0.5),
                          static_cast<double>(k));
}

// Smallest k in [0, m] with P{X <= k} >= p.
std::uint64_t smallest_at_least(std::uint64_t m, double p) {
  if (p <= 0.0) return 0;
  if (m <= kDirectLimit) {
    double term = std::ldexp(1.0, -static_cast<int>(m));
    double sum = term;
    std::uint64_t k = 0;
    while (sum < p && k < m) {
      term *= static_cast<double>(m - k) / static_cast<double>(k + 1);
      sum += term;
      ++k;
    }
    return k;
  }
  const double mid = static_cast<double>(m) / 2.0;
  const double sd = std::sqrt(static_cast<double>(m)) / 2.0;
  const double z = boost::math::quantile(boost::math::normal_distribution<>(), std::min(p, 1.0 - 1e-16));
  auto k = static_cast<std::int64_t>(std::clamp(std::floor(mid + z * sd), 0.0, static_cast<double>(m)));
  while (k > 0 && boost_cdf(m, k - 1) >= p) --k;
  while (static_cast<std::uint64_t>(k) < m && boost_cdf(m, k) < p) ++k;
  return static_cast<std::uint64_t>(k);
}

// Largest j in [-1, m] with P{X <= j} <= q.
std::int64_t largest_at_most(std::uint64_t m, double q) {
  if (m <= kDirectLimit) {
    double term = std::ldexp(1.0, -static_cast<int>(m));
    double sum = term;
    std::int64_t j = -1;
    while (sum <= q && static_cast<std::uint64_t>(j + 1) < m) {
      ++j;
      term *= static_cast<double>(m - static_cast<std::uint64_t>(j)) / static_cast<double>(j + 1);
      sum += term;
    }
    if (sum <= q) return static_cast<std::int64_t>(m);
    return j;
  }
  const double mid = static_cast<double>(m) / 2.0;
  const double sd = std::sqrt(static_cast<double>(m)) / 2.0;
  const double z = boost::math::quantile(boost::math::normal_distribution<>(), std::max(q, 1e-300));
  auto j = static_cast<std::int64_t>(std::clamp(std::floor(mid + z * sd), -1.0, static_cast<double>(m)));
  while (j >= 0 && boost_cdf(m, j) > q) --j;
  while (static_cast<std::uint64_t>(j + 1) <= m && boost_cdf(m, j + 1) <= q) ++j;
  return j;
}

}  // namespace

double binomial_half_cdf(std::uint64_t m, std::int64_t k) {
  if (k < 0) return 0.0;
  if (static_cast<std::uint64_t>(k) >= m) return 1.0;
  if (m <= kDirectLimit) {
    double term = std::ldexp(1.0, -static_cast<int>(m));
    double sum = term;
    for (std::int64_t j = 0; j < k; ++j) {
      term *= static_cast<double>(m - static_cast<std::uint64_t>(j)) / static_cast<double>(j + 1);
      sum += term;
    }
    return sum;
  }
  return boost_cdf(m, k);
}

std::uint64_t binomial_half_quantile(std::uint64_t m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0, 1]");
  return smallest_at_least(m, p);
}

std::uint64_t binomial_half_quantile_from_normal(std::uint64_t m, double z) {
  if (std::isnan(z)) throw std::domain_error("NaN normal variate");
  if (m == 0) return 0;
  if (z <= 0.0) return smallest_at_least(m, normal_cdf(z));
  // P{X <= k} >= Phi(z)  <=>  P{X <= m - 1 - k} <= Phi(-z) by symmetry.
  const std::int64_t j = largest_at_most(m, normal_cdf(-z));
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(m) - 1 - j);
}

CoupledPair dyadic_coupled_pair(std::size_t n, unsigned depth, Seed seed) {
  if (n == 0) throw std::invalid_argument("coupled pair needs n >= 1");
  if (depth > 20) throw std::invalid_argument("coupled pair depth above 20");
  RandomStream rng(seed);
  const std::size_t cells = std::size_t{1} << depth;
  CoupledPair pair{{}, {Grid::dyadic(depth), std::vector<double>(cells + 1, 0.0)}, {}, depth, n};
  pair.count_tree.resize(depth + 1);
  pair.count_tree[0] = {n};
  std::vector<double>& bridge = pair.bridge.values;
  for (unsigned level = 0; level < depth; ++level) {
    const std::size_t parents = std::size_t{1} << level;
    const std::size_t stride = cells >> level;
    const double half_sd = std::sqrt(1.0 / static_cast<double>(parents)) / 2.0;
    auto& children = pair.count_tree[level + 1];
    children.resize(parents * 2);
    for (std::size_t c = 0; c < parents; ++c) {
      const double z = rng.normal();
      const std::size_t left = c * stride;
      const std::size_t mid = left + stride / 2;
      bridge[mid] = 0.5 * (bridge[left] + bridge[left + stride]) + half_sd * z;
      const std::uint64_t m = pair.count_tree[level][c];
      const std::uint64_t k = binomial_half_quantile_from_normal(m, z);
      children[2 * c] = k;
      children[2 * c + 1] = m - k;
    }
  }
  pair.uniforms.reserve(n);
  const double width = 1.0 / static_cast<double>(cells);
  const auto& finest = pair.count_tree[depth];
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::uint64_t i = 0; i < finest[c]; ++i) {
      pair.uniforms.push_back((static_cast<double>(c) + rng.uniform()) * width);
    }
  }
  std::shuffle(pair.uniforms.begin(), pair.uniforms.end(), rng.engine());
  return pair;
}

CouplingDistance sup_coupling_distance(const CoupledPair& pair, const DistributionModel& model) {
  const std::size_t cells = std::size_t{1} << pair.depth;
  const auto& finest = pair.count_tree[pair.depth];
  const double n = static_cast<double>(pair.n);
  const double root = std::sqrt(n);

  std::vector<double> xs(pair.uniforms.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = model.quantile(pair.uniforms[i]);
  const Sample sample(std::move(xs));

  CouplingDistance d{0.0, 0.0, 0.0};
  std::uint64_t below = 0;
  for (std::size_t k = 0; k <= cells; ++k) {
    if (k > 0) below += finest[k - 1];
    const double u = pair.bridge.grid[k];
    const double b = pair.bridge.values[k];
    const double beta = root * (static_cast<double>(below) / n - u);
    d.plain = std::max(d.plain, std::abs(beta - b));
    d.sup_alpha_sq = std::max(d.sup_alpha_sq, beta * beta);
    const double t = model.quantile(u);
    const double bar = integrated_empirical_process(sample, model, t);
    d.integrated = std::max(d.integrated, std::abs(bar - u * b));
  }
  return d;
}

unsigned default_depth(std::size_t n) {
  unsigned depth = 0;
  while ((std::size_t{1} << depth) < n) ++depth;
  return depth;
}

RateReport rate_experiment(const std::vector<std::size_t>& n_list, std::size_t reps, Seed seed,
                           std::size_t threads, CouplingStatistic statistic,
                           unsigned (*depth_rule)(std::size_t)) {
  if (reps < 50) throw std::invalid_argument("rate_experiment needs reps >= 50");
  if (n_list.empty()) throw std::invalid_argument("rate_experiment needs at least one n");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw std::invalid_argument("rate_experiment needs n >= 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw std::invalid_argument("rate_experiment needs an increasing n list");
    }
  }
  const DistributionModel uniform = DistributionModel::uniform();
  RateReport report;
  report.experiment = "coupling";
  report.metadata["statistic"] =
      statistic == CouplingStatistic::integrated ? "integrated" : "plain";
  report.metadata["reps"] = std::to_string(reps);
  report.metadata["seed"] = std::to_string(seed);
  report.metadata["normalization"] = "sqrt(n)/log(n)";
  for (std::size_t n : n_list) {
    const unsigned depth = std::min(depth_rule(n), 20u);
    const Seed root = derive_seed(seed, n);
    std::vector<double> values = parallel_map(reps, threads, [&](std::size_t r) {
      const CoupledPair pair = dyadic_coupled_pair(n, depth, derive_seed(root, r));
      const CouplingDistance d = sup_coupling_distance(pair, uniform);
      return statistic == CouplingStatistic::integrated ? d.integrated : d.plain;
    });
    const double scale = std::sqrt(static_cast<double>(n)) / std::log(static_cast<double>(n));
    std::vector<double> normalized(values.size());
    for (std::size_t r = 0; r < values.size(); ++r) normalized[r] = values[r] * scale;
    const Quartiles q = quartiles(values);
    report.rows.push_back({n, q.median, q.q25, q.q75, median(normalized)});
    report.metadata["depth_n" + std::to_string(n)] = std::to_string(depth);
  }
  return report;
}

}  // namespace iep
