#include "iep/gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "iep/errors.hpp"
#include "iep/parallel.hpp"
#include "iep/report.hpp"
#include "counting.hpp"
#include "parse.hpp"

namespace iep {

NullDistribution::NullDistribution(std::vector<double> replicates) : sorted_(std::move(replicates)) {
  if (sorted_.empty()) throw std::invalid_argument("null distribution needs replicates");
  std::sort(sorted_.begin(), sorted_.end());
}

double NullDistribution::p_value(double observed) const {
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), observed);
  const auto at_least = static_cast<double>(sorted_.end() - first);
  return (1.0 + at_least) / (static_cast<double>(sorted_.size()) + 1.0);
}

double NullDistribution::critical_value(double level) const {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level outside (0, 1)");
  // p <= 1 - level  <=>  #{replicates >= observed} <= K.
  const double reps = static_cast<double>(sorted_.size());
  const auto allowed = static_cast<long long>(std::floor((1.0 - level) * (reps + 1.0) + 1e-9)) - 1;
  if (allowed < 0) return sorted_.back();
  if (allowed >= static_cast<long long>(sorted_.size())) return sorted_.front();
  return sorted_[sorted_.size() - 1 - static_cast<std::size_t>(allowed)];
}

void calibrate(TestReport& report, const NullDistribution& null) {
  report.p_value = null.p_value(report.value);
  report.critical_values.clear();
  for (double level : kReportLevels) report.critical_values[level] = null.critical_value(level);
  report.reps = null.reps();
  if (null.reps() < 1000) {
    report.warnings.push_back("fewer than 1000 null replicates; p-value resolution is coarse");
  }
}

namespace {

// Distinct order statistics with cumulative counts.
struct Knots {
  std::vector<double> x;
  std::vector<std::size_t> count;
};

Knots distinct(const Sample& sample) {
  Knots k;
  const auto sorted = sample.sorted();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!k.x.empty() && k.x.back() == sorted[i]) {
      k.count.back() = i + 1;
    } else {
      k.x.push_back(sorted[i]);
      k.count.push_back(i + 1);
    }
  }
  return k;
}

std::string cache_key(const std::string& statistic, std::size_t grid_intervals, std::size_t reps,
                      Seed seed) {
  return "statistic=" + statistic + ";grid=" + std::to_string(grid_intervals) +
         ";reps=" + std::to_string(reps) + ";seed=" + std::to_string(seed);
}


// int_a^b (c - u^2/2)^2 du
double piece(double c, double a, double b) {
  const auto antiderivative = [c](double u) {
    const double u3 = u * u * u;
    return c * c * u - c * u3 / 3.0 + u3 * u * u / 20.0;
  };
  return antiderivative(b) - antiderivative(a);
}

}  // namespace

double ks_integrated(const Sample& sample, const DistributionModel& model) {
  const std::size_t n = sample.size();
  const Knots k = distinct(sample);
  double sup = 1.0 / (2.0 * static_cast<double>(n));  // upper tail
  std::size_t before = 0;
  for (std::size_t j = 0; j < k.x.size(); ++j) {
    const double target = model.integrated_cdf(k.x[j]);
    sup = std::max({sup, std::abs(detail::integrated_count(k.count[j], n) - target), std::abs(detail::integrated_count(before, n) - target)});
    before = k.count[j];
  }
  return std::sqrt(static_cast<double>(n)) * sup;
}

double cvm_integrated(const Sample& sample, const DistributionModel& model) {
  const std::size_t n = sample.size();
  const Knots k = distinct(sample);
  double total = 0.0;
  double left = 0.0;
  std::size_t before = 0;
  for (std::size_t j = 0; j < k.x.size(); ++j) {
    const double u = model.cdf(k.x[j]);
    total += piece(detail::integrated_count(before, n), left, u);
    left = u;
    before = k.count[j];
  }
  total += piece(detail::integrated_count(n, n), left, 1.0);
  return static_cast<double>(n) * total;
}

std::string to_string(GofStatistic statistic) {
  return statistic == GofStatistic::ks ? "ks" : "cvm";
}

GofStatistic parse_gof_statistic(const std::string& name) {
  if (name == "ks") return GofStatistic::ks;
  if (name == "cvm") return GofStatistic::cvm;
  throw UsageError("unknown statistic '" + name + "' (expected ks or cvm)");
}

std::vector<double> simulate_null_ks(const Grid& grid, std::size_t reps, Seed seed,
                                     std::size_t threads) {
  return parallel_map(reps, threads, [&](std::size_t r) {
    const GridPath path = sample_bridge(grid, derive_seed(seed, r));
    double sup = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      sup = std::max(sup, std::abs(grid[k] * path.values[k]));
    }
    return sup;
  });
}

std::vector<double> simulate_null_cvm(const Grid& grid, std::size_t reps, Seed seed,
                                      std::size_t threads) {
  return parallel_map(reps, threads, [&](std::size_t r) {
    const GridPath path = sample_bridge(grid, derive_seed(seed, r));
    double total = 0.0;
    double previous = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double v = grid[k] * path.values[k];
      const double square = v * v;
      total += 0.5 * (grid[k] - grid[k - 1]) * (previous + square);
      previous = square;
    }
    return total;
  });
}

std::filesystem::path null_cache_path(const std::filesystem::path& dir, const std::string& statistic,
                                      std::size_t grid_intervals, std::size_t reps, Seed seed) {
  const std::string key = cache_key(statistic, grid_intervals, reps, seed);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char name[40];
  std::snprintf(name, sizeof name, "null_%016llx.csv", static_cast<unsigned long long>(hash));
  return dir / name;
}

namespace {

// The cached table, or nothing when the file is absent, unreadable or keyed differently.
std::optional<std::vector<double>> read_cache(const std::filesystem::path& path,
                                              const std::string& key, std::size_t reps) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != "# " + key) return std::nullopt;
  if (!std::getline(in, line) || line != "value") return std::nullopt;
  std::vector<double> values;
  values.reserve(reps);
  while (std::getline(in, line)) {
    const auto v = detail::parse_double(line);
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  if (values.size() != reps) return std::nullopt;
  return values;
}

void write_cache(const std::filesystem::path& path, const std::string& key,
                 const std::vector<double>& sorted) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path temporary = path.string() + ".tmp";
  {
    std::ofstream out(temporary);
    if (!out) throw DataError("cannot write null cache " + temporary.string());
    out << "# " << key << "\nvalue\n";
    for (double v : sorted) out << format_real(v) << '\n';
    if (!out) throw DataError("cannot write null cache " + temporary.string());
  }
  std::filesystem::rename(temporary, path);
}

}  // namespace

NullDistribution gof_null(const GofOptions& options) {
  if (options.reps == 0) throw UsageError("reps must be positive");
  const Grid grid = Grid::dyadic(options.grid_depth);
  const std::size_t intervals = grid.size() - 1;
  const std::string name = "integrated-" + to_string(options.statistic);
  const std::string key = cache_key(name, intervals, options.reps, options.seed);
  std::optional<std::filesystem::path> path;
  if (options.cache_dir) {
    path = null_cache_path(*options.cache_dir, name, intervals, options.reps, options.seed);
    if (auto cached = read_cache(*path, key, options.reps)) return NullDistribution(std::move(*cached));
  }
  NullDistribution null(options.statistic == GofStatistic::ks
                            ? simulate_null_ks(grid, options.reps, options.seed, options.threads)
                            : simulate_null_cvm(grid, options.reps, options.seed, options.threads));
  if (path) write_cache(*path, key, null.sorted());
  return null;
}

TestReport gof_test(const Sample& sample, const DistributionModel& model,
                    const GofOptions& options) {
  return gof_test(sample, model, options, gof_null(options));
}

TestReport gof_test(const Sample& sample, const DistributionModel& model,
                    const GofOptions& options, const NullDistribution& null) {
  TestReport report;
  report.statistic = "integrated-" + to_string(options.statistic);
  report.value = options.statistic == GofStatistic::ks ? ks_integrated(sample, model)
                                                       : cvm_integrated(sample, model);
  report.n = sample.size();
  report.seed = options.seed;
  report.grid_intervals = std::size_t{1} << options.grid_depth;
  calibrate(report, null);
  return report;
}

}  // namespace iep
