#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace iep {

struct RateRow {
  std::size_t n;
  double median;
  double q25;
  double q75;
  double normalized_median;
};

// Rows sorted by n, q25 <= median <= q75.
struct RateReport {
  std::string experiment;
  std::vector<RateRow> rows;
  std::map<std::string, std::string> metadata;
};

// "%.17g"
std::string format_real(double x);

// Header "n,median,q25,q75,normalized_median", metadata as leading '#' lines.
std::string to_csv(const RateReport& report);

}  // namespace iep
