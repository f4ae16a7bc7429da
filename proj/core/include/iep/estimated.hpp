#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iep/empirical.hpp"
#include "iep/gaussian.hpp"
#include "iep/gof.hpp"
#include "iep/model.hpp"
#include "iep/report.hpp"
#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

// One-parameter family F(t, theta) with an asymptotically linear estimator
// sqrt(n) (theta_hat - theta0) = n^{-1/2} sum l(X_i, theta0) + o_P(1).
class ParametricFamily {
 public:
  virtual ~ParametricFamily() = default;

  virtual std::string name() const = 0;
  virtual double cdf(double t, double theta) const = 0;
  // d/dtheta F(t, theta)
  virtual double cdf_gradient(double t, double theta) const = 0;
  virtual double quantile(double u, double theta) const = 0;
  // l(x, theta0)
  virtual double influence(double x, double theta0) const = 0;
  // l(Q(s, theta0), theta0)
  virtual double score_transform(double s, double theta0) const {
    return influence(quantile(s, theta0), theta0);
  }
  // M(theta0) = Var l(X, theta0)
  virtual double information(double theta0) const = 0;
  // Throws DataError for observations outside the support.
  virtual void validate(const Sample& sample) const = 0;
  virtual double estimate(const Sample& sample) const = 0;
  virtual DistributionModel model(double theta) const = 0;
};

// F = 1 - exp(-theta t), theta_hat = 1 / mean, l(x) = theta0 - theta0^2 x,
// score transform theta0 (1 + log(1 - s)), M = theta0^2.
class ExponentialFamily final : public ParametricFamily {
 public:
  std::string name() const override { return "exp"; }
  double cdf(double t, double theta) const override;
  double cdf_gradient(double t, double theta) const override;
  double quantile(double u, double theta) const override;
  double influence(double x, double theta0) const override;
  double score_transform(double s, double theta0) const override;
  double information(double theta0) const override;
  void validate(const Sample& sample) const override;
  double estimate(const Sample& sample) const override;
  DistributionModel model(double theta) const override;
};

// Normal with unknown mean theta and known standard deviation sigma:
// theta_hat = sample mean, l(x) = x - theta0, M = sigma^2.
class NormalMeanFamily final : public ParametricFamily {
 public:
  explicit NormalMeanFamily(double sigma = 1.0);

  std::string name() const override { return "normal-mean"; }
  double cdf(double t, double theta) const override;
  double cdf_gradient(double t, double theta) const override;
  double quantile(double u, double theta) const override;
  double influence(double x, double theta0) const override;
  double score_transform(double s, double theta0) const override;
  double information(double theta0) const override;
  void validate(const Sample& sample) const override;
  double estimate(const Sample& sample) const override;
  DistributionModel model(double theta) const override;

 private:
  double sigma_;
};

// Domain error for theta0 <= 0.
std::unique_ptr<ParametricFamily> exp_family(double theta0);
// "exp" | "normal-mean"
std::unique_ptr<ParametricFamily> parse_family(const std::string& name);
// Parameter check for a family instance: exp needs theta > 0.
void check_parameter(const ParametricFamily& family, double theta);

// hat-bar-alpha_n(t) = sqrt(n) (integrated edf(t) - F(t, theta_hat)^2 / 2)
double estimated_process(const Sample& sample, const ParametricFamily& family, double t);

// hat-alpha_n = sqrt(n) (F_n - F(., theta_hat)) and
// hat-bar-alpha_n = F(theta_hat) hat-alpha_n + hat-alpha_n^2 / (2 sqrt n) + F_n / (2 sqrt n).
HnTerms estimated_decomposition(const Sample& sample, const ParametricFamily& family, double t);

// Exact sup_t |hat-bar-alpha_n(t)|.
double estimated_sup(const Sample& sample, const ParametricFamily& family);

// Approximant on the u-grid, t_k = Q(u_k, theta0).
struct ApproximantPath {
  Grid grid;
  std::vector<double> t;       // Q(u_k, theta0)
  std::vector<double> kiefer;  // K(n, u_k) / sqrt(n)
  std::vector<double> g;       // G_n(t_k) (or hat-G_n)
  std::vector<double> gbar;    // F G_n at t_k
  double w = 0.0;              // W(n) / sqrt(n)
  double theta = 0.0;          // parameter used in F and grad F
  std::size_t n = 0;
};

// Left-point sum sum_k c_k (f(u_{k+1}) - f(u_k)) with c_k = score_transform(u_k);
// cells whose left-point score is not finite are dropped.
double stochastic_integral(const ParametricFamily& family, double theta0, const Grid& grid,
                           std::span<const double> values);

// Exact variance of the discretized integral when the integrator is a
// Brownian bridge: sum c_k^2 du_k - (sum c_k du_k)^2.
double discretized_integral_variance(const ParametricFamily& family, double theta0,
                                     const Grid& grid);

// Smallest dyadic depth in [min_depth, max_depth] at which the discretized
// variance changes by less than 1% relative to the previous depth.
unsigned refine_integral_depth(const ParametricFamily& family, double theta0,
                               unsigned min_depth = 8, unsigned max_depth = 20);

// G_n = (K(n, F(t, theta0)) - W(n) grad F(t, theta0)) / sqrt(n).
ApproximantPath gbar_path(const ParametricFamily& family, double theta0, std::size_t n,
                          const Grid& grid_u, Seed seed);
// hat-G_n: same K and W as gbar_path(seed), with theta_hat in F and grad F.
// K is linearly interpolated at F(t_k, theta_hat).
ApproximantPath ghat_path(const ParametricFamily& family, double theta0, double theta_hat,
                          std::size_t n, const Grid& grid_u, Seed seed);
// max_k |gbar_a - gbar_b| over the shared t points.
double sup_g_distance(const ApproximantPath& a, const ApproximantPath& b);

// Per n: quartiles of bar-eps_n = sup_t |hat-bar-alpha_n - bar-G_n| over the
// grid, with the data X_i = Q(U_i, theta0) and the bridge standing in for
// K(n, .) / sqrt(n) taken from one coupled pair.
RateReport epsilon_bar_experiment(const ParametricFamily& family, double theta0,
                                  const std::vector<std::size_t>& n_list, std::size_t reps,
                                  Seed seed, std::size_t threads = 1);

struct EstimatedOptions {
  std::size_t reps = 5000;
  Seed seed = 0;
  unsigned grid_depth = kDefaultGridDepth;
  std::size_t threads = 1;
};

// Replicates of sup_u |u (B(u) - grad F(Q(u)) int score dB)| for the family at theta.
std::vector<double> simulate_estimated_null(const ParametricFamily& family, double theta,
                                            const Grid& grid, std::size_t reps, Seed seed,
                                            std::size_t threads = 1);

struct EstimatedReport {
  TestReport test;
  std::string family;
  double theta_hat = 0.0;
};

// Statistic estimated_sup, p-value from the approximant at theta0 := theta_hat.
EstimatedReport estimated_test(const Sample& sample, const ParametricFamily& family,
                               const EstimatedOptions& options);

}  // namespace iep
