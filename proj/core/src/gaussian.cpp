#include "iep/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace iep {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2 || points_.front() != 0.0 || points_.back() != 1.0) {
    throw std::domain_error("grid must contain 0 and 1");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1])) throw std::domain_error("grid must increase strictly");
  }
}

Grid Grid::dyadic(unsigned depth) {
  if (depth > 30) throw std::domain_error("dyadic grid depth above 30");
  return uniform(std::size_t{1} << depth);
}

Grid Grid::uniform(std::size_t intervals) {
  if (intervals == 0) throw std::domain_error("grid needs at least one interval");
  std::vector<double> points(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    points[k] = static_cast<double>(k) / static_cast<double>(intervals);
  }
  return Grid(std::move(points));
}

namespace {

// Bridge values on the grid scaled by `scale`, added into `out`.
void add_bridge(const Grid& grid, RandomStream& rng, double scale, double* out) {
  const std::size_t size = grid.size();
  std::vector<double> w(size, 0.0);
  for (std::size_t k = 1; k < size; ++k) {
    w[k] = w[k - 1] + std::sqrt(grid[k] - grid[k - 1]) * rng.normal();
  }
  const double end = w.back();
  for (std::size_t k = 1; k + 1 < size; ++k) out[k] += scale * (w[k] - grid[k] * end);
}

}  // namespace

GridPath sample_bridge(const Grid& grid, RandomStream& rng) {
  GridPath path{grid, std::vector<double>(grid.size(), 0.0)};
  add_bridge(grid, rng, 1.0, path.values.data());
  return path;
}

GridPath sample_bridge(const Grid& grid, Seed seed) {
  RandomStream rng(seed);
  return sample_bridge(grid, rng);
}

GaussianSheet sample_kiefer_at(std::span<const double> times, const Grid& grid,
                               RandomStream& rng) {
  GaussianSheet sheet{std::vector<double>(times.begin(), times.end()), grid,
                      std::vector<double>(times.size() * grid.size(), 0.0)};
  double previous = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double dt = times[j] - previous;
    if (!(dt >= 0.0)) throw std::domain_error("Kiefer times must be nonnegative and nondecreasing");
    double* row = &sheet.at(j, 0);
    if (j > 0) {
      const double* above = &sheet.at(j - 1, 0);
      for (std::size_t k = 0; k < grid.size(); ++k) row[k] = above[k];
    }
    if (dt > 0.0) add_bridge(grid, rng, std::sqrt(dt), row);
    previous = times[j];
  }
  return sheet;
}

GaussianSheet sample_kiefer(std::size_t k_max, const Grid& grid, Seed seed) {
  if (k_max < 1) throw std::domain_error("sample_kiefer needs k_max >= 1");
  std::vector<double> times(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) times[k] = static_cast<double>(k);
  RandomStream rng(seed);
  return sample_kiefer_at(times, grid, rng);
}

GaussianSheet sample_kiefer_sheet(const Grid& grid_s, const Grid& grid_u, RandomStream& rng) {
  // Row increments of the Brownian sheet are cells N(0, ds du); subtracting
  // u times the row total turns each row increment into sqrt(ds) times a bridge.
  return sample_kiefer_at(grid_s.points(), grid_u, rng);
}

GaussianSheet sample_tied_down_kiefer(const Grid& grid_s, const Grid& grid_u,
                                      RandomStream& rng) {
  GaussianSheet sheet = sample_kiefer_sheet(grid_s, grid_u, rng);
  const std::size_t last = grid_s.size() - 1;
  for (std::size_t j = 1; j < last; ++j) {
    for (std::size_t k = 0; k < grid_u.size(); ++k) {
      sheet.at(j, k) -= grid_s[j] * sheet.at(last, k);
    }
  }
  for (std::size_t k = 0; k < grid_u.size(); ++k) sheet.at(last, k) = 0.0;
  return sheet;
}

GaussianSheet sample_tied_down_kiefer(const Grid& grid_s, const Grid& grid_u, Seed seed) {
  RandomStream rng(seed);
  return sample_tied_down_kiefer(grid_s, grid_u, rng);
}

GridPath weight_path(GridPath path) {
  for (std::size_t k = 0; k < path.values.size(); ++k) path.values[k] *= path.grid[k];
  return path;
}

GaussianSheet weight_path(GaussianSheet sheet) {
  const std::size_t width = sheet.u_grid.size();
  for (std::size_t j = 0; j < sheet.s_points.size(); ++j) {
    for (std::size_t k = 0; k < width; ++k) sheet.at(j, k) *= sheet.u_grid[k];
  }
  return sheet;
}

double var_weighted_bridge(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("u outside [0, 1]");
  return u * u * u * (1.0 - u);
}

WeightedSupVar weighted_bridge_sup_var() {
  constexpr int kPoints = 10000;
  double best = 0.0;
  double best_value = 0.0;
  for (int i = 0; i <= kPoints; ++i) {
    const double u = static_cast<double>(i) / kPoints;
    const double v = var_weighted_bridge(u);
    if (v > best_value) {
      best_value = v;
      best = u;
    }
  }
  // Newton on d/du u^3 (1 - u) = 3u^2 - 4u^3.
  for (int it = 0; it < 50; ++it) {
    const double g = 3.0 * best * best - 4.0 * best * best * best;
    const double dg = 6.0 * best - 12.0 * best * best;
    const double step = g / dg;
    best -= step;
    if (std::abs(step) < 1e-17) break;
  }
  return {best, var_weighted_bridge(best)};
}

double lil_constant() { return std::sqrt(2.0 * weighted_bridge_sup_var().value); }

}  // namespace iep
