#include "iep/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iep/parallel.hpp"
#include "counting.hpp"

namespace iep {

StepFunction::StepFunction(std::vector<double> knots, std::vector<double> values, double tail)
    : knots_(std::move(knots)), values_(std::move(values)), tail_(tail) {
  if (knots_.size() != values_.size()) {
    throw std::invalid_argument("step function needs one value per knot");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) {
      throw std::invalid_argument("step function knots must increase strictly");
    }
  }
}

double StepFunction::operator()(double t) const {
  const auto j = std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
  return j == 0 ? tail_ : values_[static_cast<std::size_t>(j - 1)];
}

double StepFunction::left_limit(double t) const {
  const auto j = std::lower_bound(knots_.begin(), knots_.end(), t) - knots_.begin();
  return j == 0 ? tail_ : values_[static_cast<std::size_t>(j - 1)];
}

namespace {

// Distinct sorted values and the cumulative count at each.
void distinct_counts(const Sample& sample, std::vector<double>& knots,
                     std::vector<std::size_t>& counts) {
  const auto sorted = sample.sorted();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!knots.empty() && knots.back() == sorted[i]) {
      counts.back() = i + 1;
    } else {
      knots.push_back(sorted[i]);
      counts.push_back(i + 1);
    }
  }
}

}  // namespace

StepFunction edf(const Sample& sample) {
  std::vector<double> knots;
  std::vector<std::size_t> counts;
  distinct_counts(sample, knots, counts);
  std::vector<double> values(counts.size());
  const double n = static_cast<double>(sample.size());
  for (std::size_t i = 0; i < counts.size(); ++i) values[i] = static_cast<double>(counts[i]) / n;
  return StepFunction(std::move(knots), std::move(values));
}

StepFunction integrated_edf(const Sample& sample) {
  std::vector<double> knots;
  std::vector<std::size_t> counts;
  distinct_counts(sample, knots, counts);
  std::vector<double> values(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    values[i] = detail::integrated_count(counts[i], sample.size());
  }
  return StepFunction(std::move(knots), std::move(values));
}

Rational integrated_edf_exact(const Sample& sample, double t) {
  const auto c = static_cast<std::int64_t>(sample.count_at_or_below(t));
  const auto n = static_cast<std::int64_t>(sample.size());
  return Rational(c * c + c, 2 * n * n);
}

Rational integrated_edf_by_counting(const Sample& sample, double t) {
  const std::size_t c = sample.count_at_or_below(t);
  std::int64_t pairs = 0;
  for (std::size_t j = 1; j <= c; ++j) {
    for (std::size_t i = 1; i <= j; ++i) ++pairs;
  }
  const auto n = static_cast<std::int64_t>(sample.size());
  return Rational(pairs, n * n);
}

double empirical_process(const Sample& sample, const DistributionModel& model, double t) {
  const double n = static_cast<double>(sample.size());
  const double fn = static_cast<double>(sample.count_at_or_below(t)) / n;
  return std::sqrt(n) * (fn - model.cdf(t));
}

double integrated_empirical_process(const Sample& sample, const DistributionModel& model,
                                    double t) {
  const double n = static_cast<double>(sample.size());
  const double bar = detail::integrated_count(sample.count_at_or_below(t), sample.size());
  return std::sqrt(n) * (bar - model.integrated_cdf(t));
}

HnTerms hn_decomposition(const Sample& sample, const DistributionModel& model, double t) {
  const double n = static_cast<double>(sample.size());
  const double root = std::sqrt(n);
  const double fn = static_cast<double>(sample.count_at_or_below(t)) / n;
  const double f = model.cdf(t);
  const double alpha = root * (fn - f);
  return {f * alpha, alpha * alpha / (2.0 * root), fn / (2.0 * root)};
}

double sup_edf_distance(const Sample& sample, const DistributionModel& model) {
  std::vector<double> knots;
  std::vector<std::size_t> counts;
  distinct_counts(sample, knots, counts);
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t before = 0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double f = model.cdf(knots[i]);
    d = std::max({d, static_cast<double>(counts[i]) / n - f, f - static_cast<double>(before) / n});
    before = counts[i];
  }
  return d;
}

DkwResult dkw_exceedance(const DistributionModel& model, std::size_t n, double x,
                         std::size_t reps, Seed seed, std::size_t threads) {
  if (reps < 100) throw std::invalid_argument("dkw_exceedance needs reps >= 100");
  if (n == 0) throw std::invalid_argument("dkw_exceedance needs n >= 1");
  if (!(x > 0.0)) throw std::domain_error("dkw_exceedance needs x > 0");
  const double threshold = std::sqrt(x / static_cast<double>(n));
  const auto hits = parallel_map(reps, threads, [&](std::size_t r) -> int {
    return sup_edf_distance(model.sample(n, derive_seed(seed, r)), model) > threshold ? 1 : 0;
  });
  std::size_t total = 0;
  for (int h : hits) total += static_cast<std::size_t>(h);
  const double p = static_cast<double>(total) / static_cast<double>(reps);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(reps)), 2.0 * std::exp(-2.0 * x), reps};
}

}  // namespace iep
