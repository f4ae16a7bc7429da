#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iep/gaussian.hpp"
#include "iep/model.hpp"
#include "iep/report.hpp"
#include "iep/rng.hpp"

namespace iep {

// P{Bin(m, 1/2) <= k}
double binomial_half_cdf(std::uint64_t m, std::int64_t k);

// Smallest k with P{Bin(m, 1/2) <= k} >= Phi(z). Computed through the lower
// tail on both sides of zero so that large |z| keeps full precision.
std::uint64_t binomial_half_quantile_from_normal(std::uint64_t m, double z);

// Smallest k with P{Bin(m, 1/2) <= k} >= p.
std::uint64_t binomial_half_quantile(std::uint64_t m, double p);

// A uniform sample and a Brownian bridge on one probability space, linked
// through the dyadic count tree.
struct CoupledPair {
  std::vector<double> uniforms;  // insertion order
  GridPath bridge;               // on the dyadic grid of `depth`
  // count_tree[l][c]: number of uniforms in dyadic cell c of level l.
  std::vector<std::vector<std::uint64_t>> count_tree;
  unsigned depth;
  std::size_t n;
};

// Levy midpoint construction of the bridge with quantile-coupled cell counts:
// at every dyadic midpoint a standard normal Z sets B(mid) and splits the parent
// count m into Binomial(m, 1/2)^{-1}(Phi(Z)) on the left. Uniforms are placed
// i.i.d. inside the finest cells and shuffled.
// Requires n >= 1 and depth <= 20 (depth 0 gives the grid {0, 1}).
CoupledPair dyadic_coupled_pair(std::size_t n, unsigned depth, Seed seed);

struct CouplingDistance {
  double plain;       // max_k |beta_n(u_k) - B(u_k)|
  double integrated;  // max_k |bar-alpha_n(Q(u_k)) - u_k B(u_k)|, X_i = Q(U_i)
  double sup_alpha_sq;  // max_k beta_n(u_k)^2
};

// Distances over the dyadic grid points, where the bridge is known.
CouplingDistance sup_coupling_distance(const CoupledPair& pair, const DistributionModel& model);

// ceil(log2 n)
unsigned default_depth(std::size_t n);

enum class CouplingStatistic { integrated, plain };

// Per n: quartiles of the chosen distance over `reps` coupled pairs and the
// median of distance * sqrt(n) / log n. depth_rule(n) picks the dyadic depth.
RateReport rate_experiment(const std::vector<std::size_t>& n_list, std::size_t reps,
                           Seed seed, std::size_t threads = 1,
                           CouplingStatistic statistic = CouplingStatistic::integrated,
                           unsigned (*depth_rule)(std::size_t) = default_depth);

}  // namespace iep
