#include "iep/sample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "iep/errors.hpp"
#include "parse.hpp"

namespace iep {

Sample::Sample(std::vector<double> observations) : observations_(std::move(observations)) {
  if (observations_.empty()) throw DataError("sample is empty");
  for (double x : observations_) {
    if (std::isnan(x)) throw DataError("sample contains NaN");
  }
  sorted_ = observations_;
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t Sample::count_at_or_below(double t) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), t) -
                                  sorted_.begin());
}

Sample Sample::slice(std::size_t first, std::size_t count) const {
  if (first > observations_.size() || count > observations_.size() - first) {
    throw std::out_of_range("sample slice out of range");
  }
  return Sample(std::vector<double>(observations_.begin() + first,
                                    observations_.begin() + first + count));
}

Sample read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view field = detail::trim(line);
    if (!field.empty() && field.front() == '#') continue;
    const auto where = [&] { return path.string() + ":" + std::to_string(line_number); };
    if (field.empty()) throw DataError(where() + ": empty line");
    const auto value = detail::parse_double(field);
    if (!value) throw DataError(where() + ": cannot parse '" + std::string(field) + "'");
    if (std::isnan(*value)) throw DataError(where() + ": NaN value");
    values.push_back(*value);
  }
  if (values.empty()) throw DataError(path.string() + ": no observations");
  return Sample(std::move(values));
}

}  // namespace iep
