#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace iep {

// Real observations in insertion order, with a cached sorted view.
// Invariant: nonempty, no NaN.
class Sample {
 public:
  explicit Sample(std::vector<double> observations);

  std::size_t size() const { return observations_.size(); }
  std::span<const double> observations() const { return observations_; }
  std::span<const double> sorted() const { return sorted_; }

  // Number of observations <= t.
  std::size_t count_at_or_below(double t) const;

  // The sub-sample made of observations [first, first + count) in insertion order.
  Sample slice(std::size_t first, std::size_t count) const;

 private:
  std::vector<double> observations_;
  std::vector<double> sorted_;
};

// One observation per line; blank lines and '#' comment lines are rejected or
// skipped respectively. Unparseable, NaN and empty lines raise DataError with
// the offending line number.
Sample read_sample_csv(const std::filesystem::path& path);

}  // namespace iep
