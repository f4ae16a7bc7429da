#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iep/rng.hpp"
#include "iep/sample.hpp"

namespace iep {

struct Knot {
  double x;
  double cdf;
};

// A hypothesized continuous distribution F with its quantile function Q
// and integrated cdf F(t)^2 / 2. Immutable after construction.
class DistributionModel {
 public:
  enum class Family { uniform, normal, exponential, piecewise_linear };

  static DistributionModel uniform();
  static DistributionModel normal(double mean, double sd);
  // Exponential with rate theta: F(t) = 1 - exp(-theta t) for t >= 0.
  static DistributionModel exponential(double rate);
  // Continuous piecewise-linear cdf through the knots. Knot x values must be
  // strictly increasing, cdf values nondecreasing, starting at 0 and ending at 1.
  static DistributionModel piecewise_linear(std::vector<Knot> knots);

  // CLI form: "uniform" | "unif" | "normal:mu,sigma" | "exp:theta" | "file:<path>".
  static DistributionModel parse(std::string_view spec);

  Family family() const { return family_; }
  double cdf(double t) const;
  // Generalized inverse inf{x : F(x) >= p}; Q(0) and Q(1) are the one-sided
  // limits and may be infinite. Throws std::domain_error for p outside [0, 1].
  double quantile(double p) const;
  double integrated_cdf(double t) const {
    const double f = cdf(t);
    return f * f / 2.0;
  }

  // n observations Q(U_1), ..., Q(U_n) from i.i.d. uniforms on (0, 1).
  Sample sample(std::size_t n, Seed seed) const;

  std::string describe() const;
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  DistributionModel(Family family, double a, double b, std::vector<Knot> knots = {});

  Family family_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<Knot> knots_;
};

// CSV of "x,F(x)" knot rows; '#' comment lines and an optional header are skipped.
DistributionModel read_piecewise_model(const std::filesystem::path& path);

}  // namespace iep
