#include "iep/multisample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "iep/errors.hpp"
#include "iep/parallel.hpp"
#include "counting.hpp"
#include "parse.hpp"

namespace iep {

namespace {

double integer_power(double x, unsigned q) {
  double result = 1.0;
  for (unsigned i = 0; i < q; ++i) result *= x;
  return result;
}

// Distinct pooled points with their multiplicities.
std::vector<std::pair<double, std::size_t>> pooled_points(std::span<const double> a,
                                                          std::span<const double> b) {
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<std::pair<double, std::size_t>> points;
  for (double v : all) {
    if (!points.empty() && points.back().first == v) {
      ++points.back().second;
    } else {
      points.emplace_back(v, 1);
    }
  }
  return points;
}

double sup_abs(const GridPath& path) {
  double sup = 0.0;
  for (double v : path.values) sup = std::max(sup, std::abs(v));
  return sup;
}

double trapezoid(const GridPath& path, bool square) {
  double total = 0.0;
  for (std::size_t k = 1; k < path.grid.size(); ++k) {
    double a = path.values[k - 1];
    double b = path.values[k];
    if (square) {
      a *= a;
      b *= b;
    }
    total += 0.5 * (path.grid[k] - path.grid[k - 1]) * (a + b);
  }
  return total;
}

bool is_two_sample(MultiSampleVariant v) {
  return v != MultiSampleVariant::k_sample_ks && v != MultiSampleVariant::k_sample_cvm;
}

bool is_modified(MultiSampleVariant v) {
  return v == MultiSampleVariant::modified_ks || v == MultiSampleVariant::modified_cvm;
}

bool is_ks(MultiSampleVariant v) {
  return v == MultiSampleVariant::two_sample_ks || v == MultiSampleVariant::modified_ks ||
         v == MultiSampleVariant::k_sample_ks;
}

}  // namespace

double two_sample_process(const Sample& x, const Sample& y, double t) {
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  const double scale = std::sqrt(static_cast<double>(m) * static_cast<double>(n) /
                                 static_cast<double>(m + n));
  return scale * (detail::integrated_count(x.count_at_or_below(t), m) - detail::integrated_count(y.count_at_or_below(t), n));
}

TwoSampleStats modified_two_sample_stats(const Sample& x, const Sample& y, unsigned q) {
  if (q == 0) throw std::domain_error("modified statistic needs q >= 1");
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  const double scale = std::sqrt(static_cast<double>(m) * static_cast<double>(n) /
                                 static_cast<double>(m + n));
  const auto xs = x.sorted();
  const auto ys = y.sorted();
  std::size_t i = 0;
  std::size_t j = 0;
  TwoSampleStats stats{0.0, 0.0};
  for (const auto& [point, multiplicity] : pooled_points(xs, ys)) {
    while (i < xs.size() && xs[i] <= point) ++i;
    while (j < ys.size() && ys[j] <= point) ++j;
    const double xi =
        scale * (integer_power(detail::integrated_count(i, m), q) - integer_power(detail::integrated_count(j, n), q));
    stats.ks = std::max(stats.ks, std::abs(xi));
    stats.cvm += static_cast<double>(multiplicity) * xi * xi;
  }
  stats.cvm /= static_cast<double>(m + n);
  return stats;
}

TwoSampleStats two_sample_stats(const Sample& x, const Sample& y) {
  return modified_two_sample_stats(x, y, 1);
}

GridPath limit_two_sample(std::size_t m, std::size_t n, unsigned q, const Grid& grid,
                          RandomStream& rng) {
  if (q == 0) throw std::domain_error("limit_two_sample needs q >= 1");
  if (m == 0 || n == 0) throw std::invalid_argument("limit_two_sample needs positive sizes");
  const GridPath b1 = sample_bridge(grid, rng);
  const GridPath b2 = sample_bridge(grid, rng);
  const double total = static_cast<double>(m + n);
  const double a1 = std::sqrt(static_cast<double>(n) / total);
  const double a2 = std::sqrt(static_cast<double>(m) / total);
  const double lead = static_cast<double>(q) / std::ldexp(1.0, static_cast<int>(q) - 1);
  GridPath path{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    path.values[k] = lead * integer_power(grid[k], 2 * q - 1) *
                     (a1 * b1.values[k] - a2 * b2.values[k]);
  }
  return path;
}

GridPath limit_two_sample(std::size_t m, std::size_t n, unsigned q, const Grid& grid, Seed seed) {
  RandomStream rng(seed);
  return limit_two_sample(m, n, q, grid, rng);
}

namespace {

Sample concatenate(const std::vector<Sample>& samples) {
  std::vector<double> all;
  for (const Sample& s : samples) {
    all.insert(all.end(), s.observations().begin(), s.observations().end());
  }
  return Sample(std::move(all));
}

std::vector<Sample> check_groups(std::vector<Sample> samples) {
  if (samples.size() < 2) throw DataError("multi-sample data needs at least two groups");
  return samples;
}

}  // namespace

MultiSample::MultiSample(std::vector<Sample> samples)
    : samples_(check_groups(std::move(samples))),
      total_(0),
      pooled_(concatenate(samples_)) {
  for (const Sample& s : samples_) total_ += s.size();
}

std::vector<std::size_t> MultiSample::sizes() const {
  std::vector<std::size_t> sizes;
  for (const Sample& s : samples_) sizes.push_back(s.size());
  return sizes;
}

std::vector<double> group_integrated_edfs(const MultiSample& ms, double t) {
  std::vector<double> values;
  for (const Sample& s : ms.samples()) values.push_back(detail::integrated_count(s.count_at_or_below(t), s.size()));
  return values;
}

double weighted_integrated_edf(const MultiSample& ms, double t) {
  double sum = 0.0;
  for (const Sample& s : ms.samples()) {
    sum += static_cast<double>(s.size()) * detail::integrated_count(s.count_at_or_below(t), s.size());
  }
  return sum / static_cast<double>(ms.total_size());
}

double pooled_integrated_edf(const MultiSample& ms, double t) {
  return detail::integrated_count(ms.pooled().count_at_or_below(t), ms.total_size());
}

double pooled_correction(const MultiSample& ms, double t) {
  const double total = static_cast<double>(ms.total_size());
  const double d = static_cast<double>(ms.pooled().count_at_or_below(t)) / total;
  double spread = 0.0;
  double plain_sum = 0.0;
  for (const Sample& s : ms.samples()) {
    const double size = static_cast<double>(s.size());
    const double f = static_cast<double>(s.count_at_or_below(t)) / size;
    spread += size * (f - d) * (f - d);
    plain_sum += f;
  }
  return (-spread + d - plain_sum) / (2.0 * total);
}

double k_sample_process(const MultiSample& ms, double t) {
  const double d = weighted_integrated_edf(ms, t);
  double sum = 0.0;
  for (const Sample& s : ms.samples()) {
    const double diff = detail::integrated_count(s.count_at_or_below(t), s.size()) - d;
    sum += static_cast<double>(s.size()) * diff * diff;
  }
  return sum;
}

double k_sample_process_decomposed(const MultiSample& ms, double reference, double t) {
  double sum = 0.0;
  for (const Sample& s : ms.samples()) {
    const double diff = detail::integrated_count(s.count_at_or_below(t), s.size()) - reference;
    sum += static_cast<double>(s.size()) * diff * diff;
  }
  const double d = weighted_integrated_edf(ms, t) - reference;
  return sum - static_cast<double>(ms.total_size()) * d * d;
}

KSampleStats k_sample_stats(const MultiSample& ms, const DistributionModel& model) {
  // xi_K is constant between consecutive distinct pooled points and zero below them.
  const auto sorted = ms.pooled().sorted();
  KSampleStats stats{0.0, 0.0};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    const double value = k_sample_process(ms, sorted[i]);
    const double upper = i + 1 < sorted.size() ? model.cdf(sorted[i + 1]) : 1.0;
    stats.ks = std::max(stats.ks, value);
    stats.cvm += value * (upper - model.cdf(sorted[i]));
  }
  return stats;
}

GridPath limit_k_sample(const std::vector<std::size_t>& sizes, const Grid& grid,
                        RandomStream& rng) {
  if (sizes.size() < 2) throw std::invalid_argument("limit_k_sample needs K >= 2");
  double total = 0.0;
  for (std::size_t n : sizes) {
    if (n == 0) throw std::invalid_argument("limit_k_sample needs positive sizes");
    total += static_cast<double>(n);
  }
  std::vector<double> squares(grid.size(), 0.0);
  std::vector<double> projection(grid.size(), 0.0);
  for (std::size_t n : sizes) {
    const GridPath b = sample_bridge(grid, rng);
    const double weight = std::sqrt(static_cast<double>(n) / total);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      squares[k] += b.values[k] * b.values[k];
      projection[k] += weight * b.values[k];
    }
  }
  GridPath path{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double u = grid[k];
    path.values[k] = u * u * (squares[k] - projection[k] * projection[k]);
  }
  return path;
}

GridPath limit_k_sample(const std::vector<std::size_t>& sizes, const Grid& grid, Seed seed) {
  RandomStream rng(seed);
  return limit_k_sample(sizes, grid, rng);
}

MultiSampleVariant parse_multisample_variant(const std::string& tag) {
  static const std::map<std::string, MultiSampleVariant> table{
      {"twosample-ks", MultiSampleVariant::two_sample_ks},
      {"twosample-cvm", MultiSampleVariant::two_sample_cvm},
      {"modified-ks", MultiSampleVariant::modified_ks},
      {"modified-cvm", MultiSampleVariant::modified_cvm},
      {"ksample-ks", MultiSampleVariant::k_sample_ks},
      {"ksample-cvm", MultiSampleVariant::k_sample_cvm},
  };
  const auto it = table.find(tag);
  if (it == table.end()) throw UsageError("unknown multi-sample variant '" + tag + "'");
  return it->second;
}

std::string to_string(MultiSampleVariant variant) {
  switch (variant) {
    case MultiSampleVariant::two_sample_ks:
      return "twosample-ks";
    case MultiSampleVariant::two_sample_cvm:
      return "twosample-cvm";
    case MultiSampleVariant::modified_ks:
      return "modified-ks";
    case MultiSampleVariant::modified_cvm:
      return "modified-cvm";
    case MultiSampleVariant::k_sample_ks:
      return "ksample-ks";
    case MultiSampleVariant::k_sample_cvm:
      return "ksample-cvm";
  }
  return "";
}

double multisample_statistic(const MultiSample& ms, const std::optional<DistributionModel>& model,
                             const MultiSampleOptions& options) {
  const MultiSampleVariant v = options.variant;
  if (is_two_sample(v)) {
    if (ms.groups() != 2) throw UsageError(to_string(v) + " needs exactly two groups");
    const unsigned q = is_modified(v) ? options.q : 1;
    const TwoSampleStats stats = modified_two_sample_stats(ms.samples()[0], ms.samples()[1], q);
    return is_ks(v) ? stats.ks : stats.cvm;
  }
  if (v == MultiSampleVariant::k_sample_cvm && !model) {
    throw UsageError("ksample-cvm integrates against a model; pass one");
  }
  const KSampleStats stats = k_sample_stats(ms, model ? *model : DistributionModel::uniform());
  return is_ks(v) ? stats.ks : stats.cvm;
}

NullDistribution multisample_null(const std::vector<std::size_t>& sizes,
                                  const MultiSampleOptions& options) {
  if (options.reps == 0) throw UsageError("reps must be positive");
  const Grid grid = Grid::dyadic(options.grid_depth);
  const MultiSampleVariant v = options.variant;
  if (is_two_sample(v) && sizes.size() != 2) throw UsageError(to_string(v) + " needs two groups");
  const unsigned q = is_modified(v) ? options.q : 1;
  return NullDistribution(parallel_map(options.reps, options.threads, [&](std::size_t r) {
    RandomStream rng(derive_seed(options.seed, r));
    if (is_two_sample(v)) {
      const GridPath path = limit_two_sample(sizes[0], sizes[1], q, grid, rng);
      return is_ks(v) ? sup_abs(path) : trapezoid(path, true);
    }
    const GridPath path = limit_k_sample(sizes, grid, rng);
    return is_ks(v) ? sup_abs(path) : trapezoid(path, false);
  }));
}

TestReport multisample_test(const MultiSample& ms, const std::optional<DistributionModel>& model,
                            const MultiSampleOptions& options) {
  return multisample_test(ms, model, options, multisample_null(ms.sizes(), options));
}

TestReport multisample_test(const MultiSample& ms, const std::optional<DistributionModel>& model,
                            const MultiSampleOptions& options, const NullDistribution& null) {
  TestReport report;
  report.statistic = to_string(options.variant);
  report.value = multisample_statistic(ms, model, options);
  report.n = ms.total_size();
  report.seed = options.seed;
  report.grid_intervals = std::size_t{1} << options.grid_depth;
  calibrate(report, null);
  return report;
}

MultiSample read_long_csv(const std::filesystem::path& path, const std::string& group_column,
                          const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_number = 0;
  std::optional<std::size_t> group_index;
  std::optional<std::size_t> value_index;
  std::size_t columns = 0;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> groups;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = detail::split(text, ',');
    const auto where = [&] { return path.string() + ":" + std::to_string(line_number); };
    if (!value_index) {
      columns = fields.size();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string_view name = detail::trim(fields[i]);
        if (name == group_column) group_index = i;
        if (name == value_column) value_index = i;
      }
      if (!group_index || !value_index) {
        throw DataError(where() + ": header must name columns '" + value_column + "' and '" +
                        group_column + "'");
      }
      continue;
    }
    if (fields.size() != columns) throw DataError(where() + ": expected " + std::to_string(columns) + " fields");
    const auto value = detail::parse_double(fields[*value_index]);
    if (!value) throw DataError(where() + ": cannot parse value");
    if (std::isnan(*value)) throw DataError(where() + ": NaN value");
    const std::string group(detail::trim(fields[*group_index]));
    if (group.empty()) throw DataError(where() + ": empty group label");
    auto [it, inserted] = groups.try_emplace(group);
    if (inserted) order.push_back(group);
    it->second.push_back(*value);
  }
  if (!value_index) throw DataError(path.string() + ": missing header row");
  std::vector<Sample> samples;
  for (const std::string& g : order) samples.emplace_back(std::move(groups[g]));
  if (samples.size() < 2) throw DataError(path.string() + ": need at least two groups");
  return MultiSample(std::move(samples));
}

}  // namespace iep
