#include "iep/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "iep/errors.hpp"
#include "parse.hpp"

namespace iep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_knots(const std::vector<Knot>& knots) {
  if (knots.size() < 2) throw DataError("piecewise-linear model needs at least two knots");
  if (knots.front().cdf != 0.0 || knots.back().cdf != 1.0) {
    throw DataError("piecewise-linear cdf must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].x) || !std::isfinite(knots[i].cdf)) {
      throw DataError("piecewise-linear knots must be finite");
    }
    if (i == 0) continue;
    if (knots[i].x <= knots[i - 1].x) throw DataError("knot x values must increase strictly");
    if (knots[i].cdf < knots[i - 1].cdf) throw DataError("knot cdf values must not decrease");
  }
}

}  // namespace

DistributionModel::DistributionModel(Family family, double a, double b, std::vector<Knot> knots)
    : family_(family), a_(a), b_(b), knots_(std::move(knots)) {}

DistributionModel DistributionModel::uniform() { return {Family::uniform, 0.0, 1.0}; }

DistributionModel DistributionModel::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
    throw std::domain_error("normal model needs a finite mean and a positive sd");
  }
  return {Family::normal, mean, sd};
}

DistributionModel DistributionModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("exponential model needs a positive rate");
  }
  return {Family::exponential, rate, 0.0};
}

DistributionModel DistributionModel::piecewise_linear(std::vector<Knot> knots) {
  check_knots(knots);
  return {Family::piecewise_linear, 0.0, 0.0, std::move(knots)};
}

DistributionModel DistributionModel::parse(std::string_view spec) {
  const auto bad = [&](const std::string& why) {
    return UsageError("invalid model '" + std::string(spec) + "': " + why);
  };
  if (spec == "uniform" || spec == "unif") return uniform();
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) throw bad("expected uniform, normal:mu,sigma, exp:theta or file:<path>");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);
  if (kind == "file") return read_piecewise_model(std::filesystem::path(std::string(args)));
  try {
    if (kind == "normal") {
      const auto fields = detail::split(args, ',');
      if (fields.size() != 2) throw bad("normal takes two parameters");
      const auto mu = detail::parse_double(fields[0]);
      const auto sigma = detail::parse_double(fields[1]);
      if (!mu || !sigma) throw bad("parameters must be numbers");
      return normal(*mu, *sigma);
    }
    if (kind == "exp") {
      const auto theta = detail::parse_double(args);
      if (!theta) throw bad("rate must be a number");
      return exponential(*theta);
    }
  } catch (const std::domain_error& e) {
    throw bad(e.what());
  }
  throw bad("unknown family '" + std::string(kind) + "'");
}

double DistributionModel::cdf(double t) const {
  switch (family_) {
    case Family::uniform:
      return std::clamp(t, 0.0, 1.0);
    case Family::normal:
      return 0.5 * std::erfc(-(t - a_) / (b_ * std::sqrt(2.0)));
    case Family::exponential:
      return t <= 0.0 ? 0.0 : -std::expm1(-a_ * t);
    case Family::piecewise_linear: {
      if (t <= knots_.front().x) return 0.0;
      if (t >= knots_.back().x) return 1.0;
      const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t,
                                          [](double v, const Knot& k) { return v < k.x; });
      const Knot& hi = *upper;
      const Knot& lo = *(upper - 1);
      return lo.cdf + (hi.cdf - lo.cdf) * (t - lo.x) / (hi.x - lo.x);
    }
  }
  return 0.0;
}

double DistributionModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  switch (family_) {
    case Family::uniform:
      return p;
    case Family::normal:
      if (p == 0.0) return -kInf;
      if (p == 1.0) return kInf;
      return boost::math::quantile(boost::math::normal_distribution<>(a_, b_), p);
    case Family::exponential:
      if (p == 1.0) return kInf;
      return -std::log1p(-p) / a_;
    case Family::piecewise_linear: {
      const auto first = std::lower_bound(knots_.begin(), knots_.end(), p,
                                          [](const Knot& k, double v) { return k.cdf < v; });
      if (first == knots_.begin() || first->cdf == p) return first->x;
      const Knot& hi = *first;
      const Knot& lo = *(first - 1);
      return lo.x + (hi.x - lo.x) * (p - lo.cdf) / (hi.cdf - lo.cdf);
    }
  }
  return 0.0;
}

Sample DistributionModel::sample(std::size_t n, Seed seed) const {
  if (n == 0) throw DataError("cannot draw an empty sample");
  RandomStream rng(seed);
  std::vector<double> xs(n);
  for (double& x : xs) x = quantile(rng.uniform());
  return Sample(std::move(xs));
}

std::string DistributionModel::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (family_) {
    case Family::uniform:
      out << "uniform";
      break;
    case Family::normal:
      out << "normal:" << a_ << ',' << b_;
      break;
    case Family::exponential:
      out << "exp:" << a_;
      break;
    case Family::piecewise_linear:
      out << "piecewise-linear(" << knots_.size() << " knots)";
      break;
  }
  return out.str();
}

DistributionModel read_piecewise_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<Knot> knots;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = detail::split(text, ',');
    const auto x = fields.size() == 2 ? detail::parse_double(fields[0]) : std::nullopt;
    const auto f = fields.size() == 2 ? detail::parse_double(fields[1]) : std::nullopt;
    if (!x || !f) {
      if (knots.empty() && line_number == 1) continue;  // header
      throw DataError(path.string() + ":" + std::to_string(line_number) +
                      ": expected 'x,F(x)'");
    }
    knots.push_back({*x, *f});
  }
  try {
    return DistributionModel::piecewise_linear(std::move(knots));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace iep
