#pragma once

#include <cstdint>
#include <random>

namespace iep {

using Seed = std::uint64_t;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for replicate `index` under `root`:
//
//   derive_seed(root, index) = splitmix64(splitmix64(root) + index * 0x9E3779B97F4A7C15)
//
// For a fixed root the map index -> seed is a bijection on 64-bit integers
// (odd multiplier, bijective finalizer), so replicate seeds cannot collide.
// Nested streams are derived by chaining: derive_seed(derive_seed(root, a), b).
constexpr Seed derive_seed(Seed root, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(root) + index * 0x9E3779B97F4A7C15ULL);
}

// A seeded stream of uniforms and standard normals. Engine is mt19937_64;
// normals come from std::normal_distribution.
class RandomStream {
 public:
  explicit RandomStream(Seed seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1), built from the top 53 bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace iep
