#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace iep::detail {

// Integrated edf value (c^2 + c) / (2 n^2) for c observations at or below t.
inline double integrated_count(std::size_t count, std::size_t n) {
  const double c = static_cast<double>(count);
  const double size = static_cast<double>(n);
  return (c * c + c) / (2.0 * size * size);
}

// floor(n s) for s in [0, 1], consistent with s computed as k / n.
inline std::size_t floor_ns(std::size_t n, double s) {
  const double size = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::clamp(std::floor(size * s), 0.0, size));
  if (k < n && static_cast<double>(k + 1) / size <= s) ++k;
  if (k > 0 && static_cast<double>(k) / size > s) --k;
  return k;
}

}  // namespace iep::detail
