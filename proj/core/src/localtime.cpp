#include "iep/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "counting.hpp"
#include "iep/parallel.hpp"
#include "iep/summary.hpp"

namespace iep {

WalkPath walk_from_uniforms(std::vector<double> uniforms) {
  WalkPath walk{std::move(uniforms), {}};
  walk.sums.reserve(walk.uniforms.size());
  double s = 0.0;
  for (double u : walk.uniforms) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("walk step uniform outside [0, 1]");
    s += 0.5 - u;
    walk.sums.push_back(s);
  }
  return walk;
}

WalkPath random_walk(std::size_t n, Seed seed) {
  RandomStream rng(seed);
  std::vector<double> uniforms(n);
  for (double& u : uniforms) u = rng.uniform();
  return walk_from_uniforms(std::move(uniforms));
}

double char_fn(double z) {
  if (z == 0.0) return 1.0;
  return std::sin(z / 2.0) / (z / 2.0);
}

std::size_t local_time(const WalkPath& walk, double x, std::size_t m) {
  if (m < 1 || m > walk.n()) throw std::invalid_argument("local_time needs 1 <= m <= n");
  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(walk.sums[i] - x) <= 0.5) ++count;
  }
  return count;
}

double LocalTimeProfile::integral() const {
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    total += values[j] * (breakpoints[j + 1] - breakpoints[j]);
  }
  return total;
}

double LocalTimeProfile::integral_of_square() const {
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    total += values[j] * values[j] * (breakpoints[j + 1] - breakpoints[j]);
  }
  return total;
}

namespace {

LocalTimeProfile build_profile(const WalkPath& walk, std::size_t m, double scale) {
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    events.emplace_back((walk.sums[i] - 0.5) * scale, 1);
    events.emplace_back((walk.sums[i] + 0.5) * scale, -1);
  }
  std::sort(events.begin(), events.end());
  LocalTimeProfile profile;
  profile.m = m;
  long level = 0;
  for (std::size_t e = 0; e < events.size();) {
    const double x = events[e].first;
    // The level reached at the previous breakpoint holds on (previous, x).
    if (!profile.breakpoints.empty()) profile.values.push_back(static_cast<double>(level) * scale);
    while (e < events.size() && events[e].first == x) level += events[e++].second;
    profile.breakpoints.push_back(x);
  }
  return profile;
}

}  // namespace

LocalTimeProfile local_time_profile(const WalkPath& walk, std::size_t m) {
  if (m > walk.n()) throw std::invalid_argument("profile time beyond the walk");
  return build_profile(walk, m, 1.0);
}

LocalTimeProfile normalized_local_time_profile(const WalkPath& walk, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("profile needs t in (0, 1]");
  const std::size_t m = detail::floor_ns(walk.n(), t);
  return build_profile(walk, m, 1.0 / std::sqrt(static_cast<double>(walk.n())));
}

double self_intersection(const WalkPath& walk, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("self_intersection needs t in [0, 1]");
  const std::size_t m = detail::floor_ns(walk.n(), t);
  std::vector<double> s(walk.sums.begin(), walk.sums.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(s.begin(), s.end());
  // For each j, the pairs i < j with s_j - s_i < 1 contribute 1 - s_j + s_i.
  double total = 0.0;
  double window_sum = 0.0;
  std::size_t start = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    while (s[j] - s[start] >= 1.0) window_sum -= s[start++];
    const double count = static_cast<double>(j - start);
    total += count * (1.0 - s[j]) + window_sum;
    window_sum += s[j];
  }
  return total;
}

IdentityCheck l2_identity_check(const WalkPath& walk, double t) {
  const double n = static_cast<double>(walk.n());
  const double m = static_cast<double>(detail::floor_ns(walk.n(), t));
  const LocalTimeProfile profile = normalized_local_time_profile(walk, t);
  return {self_intersection(walk, t),
          0.5 * std::pow(n, 1.5) * profile.integral_of_square() - 0.5 * m};
}

WienerPath sample_wiener(double horizon, std::size_t steps, Seed seed) {
  if (!(horizon > 0.0) || steps == 0) throw std::invalid_argument("wiener path needs a positive horizon and steps");
  RandomStream rng(seed);
  WienerPath path{horizon / static_cast<double>(steps), std::vector<double>(steps + 1, 0.0)};
  const double sd = std::sqrt(path.step);
  for (std::size_t k = 1; k <= steps; ++k) path.values[k] = path.values[k - 1] + sd * rng.normal();
  return path;
}

double brownian_local_time(const WienerPath& path, double x, double eps) {
  if (!(eps >= 4.0 * path.step)) {
    throw std::domain_error("local time window below four path steps");
  }
  const double lo = x - eps;
  const double hi = x + eps;
  double occupation = 0.0;
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    const double a = path.values[k - 1];
    const double b = path.values[k];
    if (a == b) {
      if (a >= lo && a <= hi) occupation += path.step;
      continue;
    }
    double from = (lo - a) / (b - a);
    double to = (hi - a) / (b - a);
    if (from > to) std::swap(from, to);
    from = std::max(from, 0.0);
    to = std::min(to, 1.0);
    if (to > from) occupation += (to - from) * path.step;
  }
  return occupation / (2.0 * eps);
}

double brownian_local_time(const WienerPath& path, double x) {
  return brownian_local_time(path, x, std::sqrt(path.step));
}

std::vector<double> simulate_brownian_local_time(std::size_t reps, unsigned depth, Seed seed,
                                                 std::size_t threads) {
  const std::size_t steps = std::size_t{1} << depth;
  return parallel_map(reps, threads, [&](std::size_t r) {
    return brownian_local_time(sample_wiener(1.0, steps, derive_seed(seed, r)), 0.0);
  });
}

LocalTimeGrowth lt_growth_experiment(const std::vector<std::size_t>& n_list, std::size_t reps,
                                     Seed seed, std::size_t threads) {
  if (reps < 50) throw std::invalid_argument("lt_growth_experiment needs reps >= 50");
  if (n_list.size() < 2) throw std::invalid_argument("lt_growth_experiment needs two or more n");
  LocalTimeGrowth growth;
  growth.report.experiment = "localtime";
  growth.report.metadata["reps"] = std::to_string(reps);
  growth.report.metadata["seed"] = std::to_string(seed);
  growth.report.metadata["normalization"] = "n^(-3/2)";
  std::vector<double> log_n;
  std::vector<double> log_median;
  for (std::size_t n : n_list) {
    if (n < 2) throw std::invalid_argument("lt_growth_experiment needs n >= 2");
    const Seed root = derive_seed(seed, n);
    const auto results = parallel_map(reps, threads, [&](std::size_t r) {
      const WalkPath walk = random_walk(n, derive_seed(root, r));
      return std::pair{self_intersection(walk, 1.0), local_time_profile(walk, n).integral_of_square()};
    });
    std::vector<double> l(reps);
    std::vector<double> squares(reps);
    std::vector<double> normalized(reps);
    const double scale = std::pow(static_cast<double>(n), -1.5);
    for (std::size_t r = 0; r < reps; ++r) {
      l[r] = results[r].first;
      squares[r] = results[r].second;
      normalized[r] = l[r] * scale;
    }
    const Quartiles q = quartiles(l);
    growth.report.rows.push_back({n, q.median, q.q25, q.q75, median(normalized)});
    growth.median_square_integral.push_back(median(squares));
    log_n.push_back(std::log(static_cast<double>(n)));
    log_median.push_back(std::log(q.median));
  }
  growth.slope = ols_slope(log_n, log_median);
  growth.report.metadata["slope"] = format_real(growth.slope);
  return growth;
}

}  // namespace iep
