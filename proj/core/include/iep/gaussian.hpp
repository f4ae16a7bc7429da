#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iep/rng.hpp"

namespace iep {

// Strictly increasing points of [0, 1] that include both endpoints.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  // 2^depth + 1 equispaced points.
  static Grid dyadic(unsigned depth);
  // intervals + 1 equispaced points.
  static Grid uniform(std::size_t intervals);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const { return points_; }

 private:
  std::vector<double> points_;
};

inline constexpr unsigned kDefaultGridDepth = 10;

struct GridPath {
  Grid grid;
  std::vector<double> values;
};

// Values on s_points x grid_u, row-major in s. s_points need not lie in
// [0, 1]: integer-time Kiefer sheets use s = 0, 1, ..., k_max.
struct GaussianSheet {
  std::vector<double> s_points;
  Grid u_grid;
  std::vector<double> values;

  double at(std::size_t s_index, std::size_t u_index) const {
    return values[s_index * u_grid.size() + u_index];
  }
  double& at(std::size_t s_index, std::size_t u_index) {
    return values[s_index * u_grid.size() + u_index];
  }
};

// Brownian bridge on the grid: Wiener increments N(0, du), B(u) = W(u) - u W(1).
// B(0) = B(1) = 0 exactly.
GridPath sample_bridge(const Grid& grid, RandomStream& rng);
GridPath sample_bridge(const Grid& grid, Seed seed);

// Kiefer process at the given nondecreasing nonnegative times:
// K(t_j, .) = K(t_{j-1}, .) + sqrt(t_j - t_{j-1}) * independent bridge, K(0, .) = 0.
GaussianSheet sample_kiefer_at(std::span<const double> times, const Grid& grid,
                               RandomStream& rng);

// Integer-time Kiefer sheet K(k, .) for k = 0, ..., k_max (k_max >= 1).
GaussianSheet sample_kiefer(std::size_t k_max, const Grid& grid, Seed seed);

// Kiefer sheet on grid_s x grid_u built from a Brownian sheet with independent
// cell increments: K(s, u) = W(s, u) - u W(s, 1).
GaussianSheet sample_kiefer_sheet(const Grid& grid_s, const Grid& grid_u, RandomStream& rng);

// Tied-down Kiefer process K(s, u) - s K(1, u); vanishes on the whole boundary.
GaussianSheet sample_tied_down_kiefer(const Grid& grid_s, const Grid& grid_u,
                                      RandomStream& rng);
GaussianSheet sample_tied_down_kiefer(const Grid& grid_s, const Grid& grid_u, Seed seed);

// Multiplies the value at u by u.
GridPath weight_path(GridPath path);
GaussianSheet weight_path(GaussianSheet sheet);

// Var(u B(u)) = u^3 (1 - u).
double var_weighted_bridge(double u);

struct WeightedSupVar {
  double argmax;
  double value;
};
// Maximizer of u^3 (1 - u) on [0, 1]: grid search followed by Newton
// iterations on the derivative.
WeightedSupVar weighted_bridge_sup_var();

// Law of the iterated logarithm constant sqrt(2 sup_u u^3 (1 - u)).
double lil_constant();

}  // namespace iep
