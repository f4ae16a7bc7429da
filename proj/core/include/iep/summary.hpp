#pragma once

#include <functional>
#include <span>
#include <vector>

namespace iep {

double mean(std::span<const double> xs);
// Sample variance with denominator n - 1.
double variance(std::span<const double> xs);
// Standard error of the mean.
double standard_error(std::span<const double> xs);

// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
double quantile_sorted(std::span<const double> sorted, double level);
double median(std::vector<double> xs);

struct Quartiles {
  double q25;
  double median;
  double q75;
};
Quartiles quartiles(std::vector<double> xs);

// sup |F_a - F_b| between two empirical distributions.
double ks_distance(std::vector<double> a, std::vector<double> b);
// sup |F_n - F| for a sample against a continuous cdf.
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf);
// Asymptotic Kolmogorov tail P(sqrt(n_eff) D > .) with Stephens' finite-n correction.
double kolmogorov_p_value(double distance, double effective_n);

// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace iep
