#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iep/gaussian.hpp"
#include "iep/model.hpp"
#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

// Sorted Monte Carlo replicates of a null statistic.
class NullDistribution {
 public:
  explicit NullDistribution(std::vector<double> replicates);

  std::size_t reps() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // (1 + #{replicates >= observed}) / (reps + 1)
  double p_value(double observed) const;

  // Order statistic c with: observed > c  <=>  p_value(observed) <= 1 - level
  // (for continuous replicates).
  double critical_value(double level) const;

 private:
  std::vector<double> sorted_;
};

inline const std::vector<double> kReportLevels{0.90, 0.95, 0.99};

struct TestReport {
  std::string statistic;
  double value = 0.0;
  double p_value = 1.0;
  std::map<double, double> critical_values;  // level -> value
  std::size_t n = 0;
  std::size_t reps = 0;
  Seed seed = 0;
  std::size_t grid_intervals = 0;
  std::vector<std::string> warnings;
};

// Fills p-value and the critical values at kReportLevels; warns when reps < 1000.
void calibrate(TestReport& report, const NullDistribution& null);

// S_n = sup_t sqrt(n) |integrated edf(t) - F0(t)^2 / 2|, exact over the
// observation points, their left limits and the tails.
double ks_integrated(const Sample& sample, const DistributionModel& model);

// T_n = n int (integrated edf - F0^2 / 2)^2 dF0, exact piecewise integration in u = F0(t).
double cvm_integrated(const Sample& sample, const DistributionModel& model);

enum class GofStatistic { ks, cvm };
std::string to_string(GofStatistic statistic);
GofStatistic parse_gof_statistic(const std::string& name);

// Replicates of sup_u |u B(u)| over the grid.
std::vector<double> simulate_null_ks(const Grid& grid, std::size_t reps, Seed seed,
                                     std::size_t threads = 1);
// Replicates of int_0^1 u^2 B(u)^2 du (trapezoid rule on the grid).
std::vector<double> simulate_null_cvm(const Grid& grid, std::size_t reps, Seed seed,
                                      std::size_t threads = 1);

struct GofOptions {
  GofStatistic statistic = GofStatistic::ks;
  std::size_t reps = 10000;
  Seed seed = 0;
  unsigned grid_depth = kDefaultGridDepth;
  std::size_t threads = 1;
  std::optional<std::filesystem::path> cache_dir;
};

// Null table for the options, read from or written to the cache directory
// when one is configured. Cache file: null_<hash>.csv (see null_cache_path).
NullDistribution gof_null(const GofOptions& options);

// Cache key "statistic=<s>;grid=<2^depth>;reps=<r>;seed=<seed>", hashed with
// 64-bit FNV-1a into null_<16 hex digits>.csv.
std::filesystem::path null_cache_path(const std::filesystem::path& dir, const std::string& statistic,
                                      std::size_t grid_intervals, std::size_t reps, Seed seed);

TestReport gof_test(const Sample& sample, const DistributionModel& model,
                    const GofOptions& options);
TestReport gof_test(const Sample& sample, const DistributionModel& model,
                    const GofOptions& options, const NullDistribution& null);

}  // namespace iep
