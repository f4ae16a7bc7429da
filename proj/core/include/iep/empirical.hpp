#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/rational.hpp>

#include "iep/model.hpp"
#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

// Right-continuous piecewise-constant function: `tail` left of the first knot,
// values[i] on [knots[i], knots[i + 1]).
class StepFunction {
 public:
  StepFunction(std::vector<double> knots, std::vector<double> values, double tail = 0.0);

  double operator()(double t) const;
  // lim_{s -> t-} f(s)
  double left_limit(double t) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  double tail() const { return tail_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double tail_;
};

using Rational = boost::rational<std::int64_t>;

// F_n(t) = #{i : X_i <= t} / n. Ties aggregate into one jump.
StepFunction edf(const Sample& sample);

// Integrated edf 1/2 (F_n^2 + F_n / n), same knots as edf. Each value is
// (c^2 + c) / (2 n^2) for the count c, evaluated with a single rounding.
StepFunction integrated_edf(const Sample& sample);

// Exact integrated edf at t from the count c = n F_n(t): (c^2 + c) / (2 n^2).
Rational integrated_edf_exact(const Sample& sample, double t);

// Pair-counting route: #{(i, j) : 1 <= i <= j <= c} / n^2 by enumeration.
Rational integrated_edf_by_counting(const Sample& sample, double t);

// alpha_n(t) = sqrt(n) (F_n(t) - F(t))
double empirical_process(const Sample& sample, const DistributionModel& model, double t);

// bar-alpha_n(t) = sqrt(n) (integrated edf(t) - F(t)^2 / 2)
double integrated_empirical_process(const Sample& sample, const DistributionModel& model,
                                    double t);

// bar-alpha_n = F alpha_n + alpha_n^2 / (2 sqrt n) + F_n / (2 sqrt n)
struct HnTerms {
  double linear;
  double quadratic;
  double remainder;
  double sum() const { return linear + quadratic + remainder; }
};
HnTerms hn_decomposition(const Sample& sample, const DistributionModel& model, double t);

// Exact sup_t |F_n(t) - F(t)| for a continuous F.
double sup_edf_distance(const Sample& sample, const DistributionModel& model);

struct DkwResult {
  double exceedance;     // Monte Carlo P{ sup |F_n - F| > sqrt(x / n) }
  double standard_error;
  double bound;          // 2 exp(-2x)
  std::size_t reps;
};

// Requires reps >= 100.
DkwResult dkw_exceedance(const DistributionModel& model, std::size_t n, double x,
                         std::size_t reps, Seed seed, std::size_t threads = 1);

}  // namespace iep
