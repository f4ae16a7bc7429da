#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iep/gaussian.hpp"
#include "iep/gof.hpp"
#include "iep/model.hpp"
#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

// Size convention: the first sample x (size m) carries the integrated edf
// F_m, the second sample y (size n) carries G_n, and
//
//   xi_{m,n}(t) = sqrt(m n / (m + n)) (F_m(t) - G_n(t)).
double two_sample_process(const Sample& x, const Sample& y, double t);

struct TwoSampleStats {
  double ks;   // sup_t |xi(t)|
  double cvm;  // int xi^2 dH, H the pooled edf
};

TwoSampleStats two_sample_stats(const Sample& x, const Sample& y);

// Statistics of sqrt(m n / (m + n)) (F_m^q - G_n^q). q = 0 is a domain error.
TwoSampleStats modified_two_sample_stats(const Sample& x, const Sample& y, unsigned q);

// (q / 2^{q-1}) u^{2q-1} (sqrt(n/(m+n)) B1(u) - sqrt(m/(m+n)) B2(u)), B1, B2 independent.
GridPath limit_two_sample(std::size_t m, std::size_t n, unsigned q, const Grid& grid,
                          RandomStream& rng);
GridPath limit_two_sample(std::size_t m, std::size_t n, unsigned q, const Grid& grid, Seed seed);

// K >= 2 nonempty samples.
class MultiSample {
 public:
  explicit MultiSample(std::vector<Sample> samples);

  std::size_t groups() const { return samples_.size(); }
  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t total_size() const { return total_; }
  std::vector<std::size_t> sizes() const;
  // Pooled observations in group order.
  const Sample& pooled() const { return pooled_; }

 private:
  std::vector<Sample> samples_;
  std::size_t total_;
  Sample pooled_;
};

// Integrated edf of group k at t.
std::vector<double> group_integrated_edfs(const MultiSample& ms, double t);

// D(t) = (1/|n|) sum_k n_k F_k(t), the size-weighted mean of the group
// integrated edfs.
double weighted_integrated_edf(const MultiSample& ms, double t);

// The integrated edf of the pooled sample. It differs from the weighted mean
// by an exact correction (see pooled_correction).
double pooled_integrated_edf(const MultiSample& ms, double t);

// pooled - weighted = -(1 / 2|n|) sum_k n_k (F_k - D)^2 + (1 / 2|n|) (D - sum_k F_k),
// with plain edfs F_k and pooled plain edf D.
double pooled_correction(const MultiSample& ms, double t);

// xi_K(t) = sum_k n_k (F_k(t) - D(t))^2 with D the weighted mean.
double k_sample_process(const MultiSample& ms, double t);

// sum_k n_k (F_k - F0bar)^2 - |n| (D - F0bar)^2 for an arbitrary reference F0bar.
double k_sample_process_decomposed(const MultiSample& ms, double reference, double t);

struct KSampleStats {
  double ks;   // sup_t xi_K(t)
  double cvm;  // int xi_K dF0
};
KSampleStats k_sample_stats(const MultiSample& ms, const DistributionModel& model);

// u^2 [ sum_k B_k(u)^2 - (sum_k sqrt(n_k/|n|) B_k(u))^2 ], K independent bridges.
GridPath limit_k_sample(const std::vector<std::size_t>& sizes, const Grid& grid,
                        RandomStream& rng);
GridPath limit_k_sample(const std::vector<std::size_t>& sizes, const Grid& grid, Seed seed);

enum class MultiSampleVariant {
  two_sample_ks,
  two_sample_cvm,
  modified_ks,
  modified_cvm,
  k_sample_ks,
  k_sample_cvm,
};
// "twosample-ks", "twosample-cvm", "modified-ks", "modified-cvm", "ksample-ks",
// "ksample-cvm". Unknown tags raise UsageError.
MultiSampleVariant parse_multisample_variant(const std::string& tag);
std::string to_string(MultiSampleVariant variant);

struct MultiSampleOptions {
  MultiSampleVariant variant = MultiSampleVariant::two_sample_ks;
  unsigned q = 1;
  std::size_t reps = 10000;
  Seed seed = 0;
  unsigned grid_depth = kDefaultGridDepth;
  std::size_t threads = 1;
};

double multisample_statistic(const MultiSample& ms, const std::optional<DistributionModel>& model,
                             const MultiSampleOptions& options);

// Replicates of the limit functional matching the variant and group sizes.
NullDistribution multisample_null(const std::vector<std::size_t>& sizes,
                                  const MultiSampleOptions& options);

// Two-sample variants use the first two groups; k-sample CvM requires a model.
TestReport multisample_test(const MultiSample& ms, const std::optional<DistributionModel>& model,
                            const MultiSampleOptions& options);
TestReport multisample_test(const MultiSample& ms, const std::optional<DistributionModel>& model,
                            const MultiSampleOptions& options, const NullDistribution& null);

// Long-format CSV with a header row; `value_column` and `group_column` name the
// columns. Groups keep their order of first appearance.
MultiSample read_long_csv(const std::filesystem::path& path, const std::string& group_column,
                          const std::string& value_column = "value");

}  // namespace iep
