#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iep/report.hpp"
#include "iep/rng.hpp"

namespace iep {

// Partial sums S_k = sum_{i <= k} (1/2 - U_i), k = 1..n. S_0 = 0 is not a visit.
struct WalkPath {
  std::vector<double> uniforms;
  std::vector<double> sums;  // sums[k - 1] = S_k
  std::size_t n() const { return sums.size(); }
};

// Domain error for a value outside [0, 1].
WalkPath walk_from_uniforms(std::vector<double> uniforms);
WalkPath random_walk(std::size_t n, Seed seed);

// sin(z / 2) / (z / 2), with chi(0) = 1.
double char_fn(double z);

// #{i <= m : |S_i - x| <= 1/2}; requires 1 <= m <= n.
std::size_t local_time(const WalkPath& walk, double x, std::size_t m);

// Piecewise-constant profile: values[j] on (breakpoints[j], breakpoints[j + 1]),
// zero outside [breakpoints.front(), breakpoints.back()].
struct LocalTimeProfile {
  std::vector<double> breakpoints;
  std::vector<double> values;
  std::size_t m = 0;

  double integral() const;
  double integral_of_square() const;
};

// x -> lambda(x, m), breakpoints S_i +- 1/2.
LocalTimeProfile local_time_profile(const WalkPath& walk, std::size_t m);

// Lambda_n(x, t) = lambda(sqrt(n) x, floor(n t)) / sqrt(n); requires t in (0, 1].
LocalTimeProfile normalized_local_time_profile(const WalkPath& walk, double t);

// L_n(t) = sum_{1 <= i < j <= floor(n t)} max(0, 1 - |S_i - S_j|), by sorting
// and prefix sums.
double self_intersection(const WalkPath& walk, double t);

struct IdentityCheck {
  double lhs;  // L_n(t)
  double rhs;  // 1/2 n^{3/2} int Lambda_n^2 dx - 1/2 floor(n t)
};
IdentityCheck l2_identity_check(const WalkPath& walk, double t);

// Wiener path sampled at 0, step, 2 step, ... with W(0) = 0.
struct WienerPath {
  double step;
  std::vector<double> values;
  double horizon() const { return step * static_cast<double>(values.size() - 1); }
};

WienerPath sample_wiener(double horizon, std::size_t steps, Seed seed);

// (1 / 2 eps) * time spent in [x - eps, x + eps], with the path linearly
// interpolated between grid points. Default eps is sqrt(step); eps < 4 step
// is a resolution error (std::domain_error).
double brownian_local_time(const WienerPath& path, double x, double eps);
double brownian_local_time(const WienerPath& path, double x);

// Replicates of l(0, 1) on a path with 2^depth steps.
std::vector<double> simulate_brownian_local_time(std::size_t reps, unsigned depth, Seed seed,
                                                 std::size_t threads = 1);

struct LocalTimeGrowth {
  // Rows: quartiles of L_n(1); normalized_median is the median of L_n(1) / n^{3/2}.
  RateReport report;
  std::vector<double> median_square_integral;  // median of int lambda(x, n)^2 dx per n
  double slope = 0.0;                           // OLS slope of log median L_n(1) on log n
};

// Requires reps >= 50.
LocalTimeGrowth lt_growth_experiment(const std::vector<std::size_t>& n_list, std::size_t reps,
                                     Seed seed, std::size_t threads = 1);

}  // namespace iep
