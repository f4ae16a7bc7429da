#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "iep/localtime.hpp"
#include "iep/summary.hpp"

namespace {

using iep::WalkPath;

WalkPath two_step() { return iep::walk_from_uniforms({0.1, 0.9}); }

TEST(Walk, PartialSums) {
  const auto walk = two_step();
  ASSERT_EQ(walk.n(), 2u);
  EXPECT_DOUBLE_EQ(walk.sums[0], 0.4);
  EXPECT_NEAR(walk.sums[1], 0.0, 1e-16);
  const auto flat = iep::walk_from_uniforms({0.5, 0.5, 0.5});
  for (double s : flat.sums) EXPECT_EQ(s, 0.0);
  EXPECT_THROW(iep::walk_from_uniforms({0.5, 1.5}), std::domain_error);
  EXPECT_THROW(iep::walk_from_uniforms({-0.1}), std::domain_error);
}

TEST(Walk, Moments) {
  std::vector<double> last, square;
  for (int r = 0; r < 10000; ++r) {
    const auto walk = iep::random_walk(12, iep::derive_seed(80, r));
    last.push_back(walk.sums.back());
    square.push_back(walk.sums.back() * walk.sums.back());
  }
  EXPECT_NEAR(iep::mean(last), 0.0, 4 * iep::standard_error(last));
  EXPECT_NEAR(iep::mean(square), 1.0, 4 * iep::standard_error(square));
}

TEST(CharFn, Values) {
  EXPECT_EQ(iep::char_fn(0.0), 1.0);
  EXPECT_NEAR(iep::char_fn(2 * std::numbers::pi), 0.0, 1e-15);
  const double bound = std::sin(0.5) / 0.5;
  EXPECT_NEAR(bound, 0.9589, 1e-4);
  for (double z = 1.0; z <= 1e6; z *= 1.001) {
    ASSERT_LE(std::abs(iep::char_fn(z)), bound + 1e-15);
    ASSERT_LE(std::abs(iep::char_fn(-z)), bound + 1e-15);
  }
}

TEST(LocalTime, Counts) {
  const auto walk = two_step();
  EXPECT_EQ(iep::local_time(walk, 0.0, 2), 2u);
  EXPECT_EQ(iep::local_time(walk, 0.0, 1), 1u);
  EXPECT_EQ(iep::local_time(walk, 0.9, 2), 1u);  // closed window: |0.4 - 0.9| = 1/2
  EXPECT_EQ(iep::local_time(walk, 5.0, 2), 0u);
  EXPECT_THROW(iep::local_time(walk, 0.0, 0), std::exception);
  EXPECT_THROW(iep::local_time(walk, 0.0, 3), std::exception);
}

TEST(LocalTime, ProfileIntegral) {
  for (int r = 0; r < 50; ++r) {
    const auto walk = iep::random_walk(10 + 7 * r, iep::derive_seed(81, r));
    for (std::size_t m : {std::size_t{1}, walk.n() / 2, walk.n()}) {
      const auto profile = iep::local_time_profile(walk, m);
      EXPECT_NEAR(profile.integral(), static_cast<double>(m), 1e-9 * m);
      // The profile agrees with direct counting away from breakpoints.
      for (std::size_t j = 0; j < profile.values.size(); ++j) {
        const double x = 0.5 * (profile.breakpoints[j] + profile.breakpoints[j + 1]);
        if (profile.breakpoints[j + 1] - profile.breakpoints[j] < 1e-9) continue;
        ASSERT_EQ(profile.values[j], static_cast<double>(iep::local_time(walk, x, m)));
      }
    }
  }
}

TEST(SelfIntersection, Examples) {
  EXPECT_DOUBLE_EQ(iep::self_intersection(two_step(), 1.0), 0.6);
  EXPECT_EQ(iep::self_intersection(two_step(), 0.5), 0.0);
  EXPECT_EQ(iep::self_intersection(two_step(), 0.0), 0.0);
}

TEST(SelfIntersection, MatchesQuadrature) {
  for (int r = 0; r < 100; ++r) {
    const auto walk = iep::random_walk(2 + r, iep::derive_seed(82, r));
    const auto& s = walk.sums;
    const double lo = *std::min_element(s.begin(), s.end()) - 1.0;
    const double hi = *std::max_element(s.begin(), s.end()) + 1.0;
    const double step = 1e-3;
    double direct = 0.0;
    for (double x = lo + step / 2; x < hi; x += step) {
      double visits = 0.0;
      for (double v : s) visits += std::abs(v - x) <= 0.5;
      direct += visits * (visits - 1.0) / 2.0 * step;
    }
    const double pairs = s.size() * (s.size() - 1.0) / 2.0;
    EXPECT_NEAR(iep::self_intersection(walk, 1.0), direct, 2 * step * pairs);
  }
}

TEST(Identity, ExactOnRandomWalks) {
  for (int r = 0; r < 100; ++r) {
    const auto walk = iep::random_walk(1 + 17 * r, iep::derive_seed(83, r));
    for (double t : {0.25, 0.5, 1.0}) {
      const auto check = iep::l2_identity_check(walk, t);
      EXPECT_LE(std::abs(check.lhs - check.rhs), 1e-9 * (1.0 + check.lhs));
      const auto profile = iep::normalized_local_time_profile(walk, t);
      const double n = static_cast<double>(walk.n());
      EXPECT_NEAR(profile.integral(), std::floor(n * t) / n, 1e-12);
    }
  }
}

TEST(Identity, SingleStep) {
  const auto check = iep::l2_identity_check(iep::walk_from_uniforms({0.3}), 1.0);
  EXPECT_EQ(check.lhs, 0.0);
  EXPECT_NEAR(check.rhs, 0.0, 1e-15);
  EXPECT_THROW(iep::normalized_local_time_profile(two_step(), 0.0), std::domain_error);
}

TEST(BrownianLocalTime, Occupation) {
  const auto path = iep::sample_wiener(2.0, 1 << 14, 84);
  EXPECT_EQ(iep::brownian_local_time(path, 100.0), 0.0);
  const double lo = *std::min_element(path.values.begin(), path.values.end()) - 0.5;
  const double hi = *std::max_element(path.values.begin(), path.values.end()) + 0.5;
  const double dx = 1e-3;
  double total = 0.0;
  for (double x = lo; x < hi; x += dx) total += iep::brownian_local_time(path, x, 0.02) * dx;
  EXPECT_NEAR(total, path.horizon(), 0.01 * path.horizon());
  EXPECT_THROW(iep::brownian_local_time(path, 0.0, 2 * path.step), std::domain_error);
}

// Levy: l(0, 1) has the law of |N(0, 1)|.
TEST(BrownianLocalTime, LevyIdentity) {
  const auto values = iep::simulate_brownian_local_time(2000, 14, 85);
  const double d = iep::ks_distance(values, [](double x) {
    return x <= 0 ? 0.0 : std::erf(x / std::sqrt(2.0));
  });
  EXPECT_GT(iep::kolmogorov_p_value(d, values.size()), 0.001);
}

TEST(Growth, MediansIncrease) {
  const auto a = iep::lt_growth_experiment({64, 256, 1024}, 50, 86, 1);
  ASSERT_EQ(a.report.rows.size(), 3u);
  EXPECT_LT(a.report.rows[0].median, a.report.rows[1].median);
  EXPECT_LT(a.report.rows[1].median, a.report.rows[2].median);
  EXPECT_LT(a.median_square_integral[0], a.median_square_integral[2]);
  const auto b = iep::lt_growth_experiment({64, 256, 1024}, 50, 86, 4);
  EXPECT_EQ(iep::to_csv(a.report), iep::to_csv(b.report));
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_THROW(iep::lt_growth_experiment({64}, 49, 1), std::exception);
}

// The 5%-95% band of L_n(1) / n^{3/2} stays inside [k1 / sqrt(loglog n), k2 sqrt(loglog n)]
// with k1, k2 fitted at the smallest n.
TEST(Growth, LogLogSandwich) {
  auto band = [](std::size_t n) {
    std::vector<double> v;
    for (int r = 0; r < 1000; ++r) {
      const auto walk = iep::random_walk(n, iep::derive_seed(87 + n, r));
      v.push_back(iep::self_intersection(walk, 1.0) / std::pow(double(n), 1.5));
    }
    std::sort(v.begin(), v.end());
    return std::pair{iep::quantile_sorted(v, 0.05), iep::quantile_sorted(v, 0.95)};
  };
  auto loglog = [](double n) { return std::sqrt(std::log(std::log(n))); };
  const auto [low0, high0] = band(256);
  const double k1 = low0 * loglog(256), k2 = high0 / loglog(256);
  for (std::size_t n : {1024u, 4096u}) {
    const auto [low, high] = band(n);
    EXPECT_GE(low, k1 / loglog(n)) << n;
    EXPECT_LE(high, k2 * loglog(n)) << n;
  }
}

}  // namespace
