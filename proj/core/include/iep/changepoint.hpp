#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iep/gaussian.hpp"
#include "iep/gof.hpp"
#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

// Positive weight on (0, 1).
class WeightFunction {
 public:
  WeightFunction(std::string name, std::function<double(double)> rule, bool symmetric);

  // w(t) = sqrt(t (1 - t) log log(1 / (t (1 - t))))
  static WeightFunction loglog();

  double operator()(double t) const { return rule_(t); }
  const std::string& name() const { return name_; }
  bool symmetric() const { return symmetric_; }

 private:
  std::string name_;
  std::function<double(double)> rule_;
  bool symmetric_;
};

double weight_eval(const WeightFunction& w, double t);

struct WeightIntegral {
  bool finite;
  double value;  // integral over (2^-20, 1 - 2^-20)
  // increments[j - 5]: contribution of the shells (2^-j, 2^-(j-1)) and their mirror images, j = 5..20
  std::vector<double> increments;
};

// I(w, eps) = int_0^1 exp(-eps w(s)^2 / (s (1 - s))) ds / (s (1 - s)).
// The core (1/16, 15/16) and each dyadic shell are integrated adaptively to
// relative tolerance `tol`; the integral is declared divergent when any
// ratio of successive shell increments for j >= 12 exceeds 0.95.
// tol <= 0 or eps <= 0 is a domain error.
WeightIntegral weight_integral(const WeightFunction& w, double eps, double tol = 1e-10);

// tilde-alpha_n(s, t) = (k (n - k) / n^{3/2}) (F-_k(t) - F+_{n-k}(t)), k = floor(n s),
// with the convention that it vanishes for k in {0, n}.
double cp_process(const Sample& sample, double s, double t);

struct CpSup {
  double value;
  std::size_t k;   // argmax split: first k observations vs the rest
  double t;       // argmax location in data units
};

// tau_n: exact double sup over k = 0..n and the observation points. For fixed k
// the contrast is a step function of t with jumps at the observations, so its
// sup is attained at an order statistic.
CpSup tau(const Sample& sample);
// tau_{n,w}: sup over k = 1..n-1 of |tilde-alpha_n| / w(k / n). Requires n >= 2;
// a nonpositive or non-finite weight at some k / n is a domain error.
CpSup tau_weighted(const Sample& sample, const WeightFunction& w);

// Four-branch covariance kernel of the tied-down approximant.
double psi_n(double s, double t, std::size_t n);

// Finite-n tied-down approximant built from two independent integer-time
// Kiefer processes K1, K2 (disjoint seed substreams):
//   s <= 1/2: K2(floor(ns), u) - s (K1(h, u) + K2(h, u))
//   s >= 1/2: -K1(floor(n(1-s)), u) + (1 - s) (K1(h, u) + K2(h, u)),   h = floor(n/2),
// divided by sqrt(n). Covariance (1/n)(u^v - uv) psi_n(s, t).
GaussianSheet build_tied_down_approximant(std::size_t n, const Grid& grid_s, const Grid& grid_u,
                                          Seed seed);
// The weighted version u * (tied-down approximant).
GaussianSheet build_cp_approximant(std::size_t n, const Grid& grid_s, const Grid& grid_u,
                                   Seed seed);

// Replicates of sup_{s,u} |u K°(s, u)| (optionally divided by w(s), interior s only)
// from the continuous tied-down Kiefer sheet on the grids.
std::vector<double> simulate_cp_limit(const Grid& grid_s, const Grid& grid_u, std::size_t reps,
                                      Seed seed, const std::optional<WeightFunction>& w = {},
                                      std::size_t threads = 1);

struct ChangePointReport {
  std::string statistic;  // "tau" or "tau_weighted"
  double value = 0.0;
  double p_value = 1.0;
  std::map<double, double> critical_values;  // level -> value
  std::size_t k_hat = 0;
  double s_hat = 0.0;  // k_hat / n
  double t_hat = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  Seed seed = 0;
  std::size_t grid_intervals = 0;
  std::vector<std::string> warnings;
};

struct CpOptions {
  bool weighted = false;
  std::size_t reps = 10000;
  Seed seed = 0;
  unsigned grid_depth = 8;  // limit sheet on (2^d + 1) x (2^d + 1) points
  std::size_t threads = 1;
};

NullDistribution cp_null(const CpOptions& options);

// Grid depth whose resolution matches a sample of size n: smallest d with
// 2^d >= n, clamped to [6, 10]. Coarser grids bias the limit sup low.
unsigned cp_grid_depth(std::size_t n);

// Weighted variant requires n >= 4.
ChangePointReport cp_test(const Sample& sample, const CpOptions& options);
ChangePointReport cp_test(const Sample& sample, const CpOptions& options,
                          const NullDistribution& null);

}  // namespace iep
