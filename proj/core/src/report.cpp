#include "iep/report.hpp"

#include <cstdio>

namespace iep {

std::string format_real(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

std::string to_csv(const RateReport& report) {
  std::string out;
  out += "# experiment=" + report.experiment + "\n";
  for (const auto& [key, value] : report.metadata) out += "# " + key + "=" + value + "\n";
  out += "n,median,q25,q75,normalized_median\n";
  for (const RateRow& row : report.rows) {
    out += std::to_string(row.n) + "," + format_real(row.median) + "," + format_real(row.q25) +
           "," + format_real(row.q75) + "," + format_real(row.normalized_median) + "\n";
  }
  return out;
}

}  // namespace iep
