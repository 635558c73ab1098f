#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace conecg {

/// splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// std::mt19937_64 seeded with splitmix64(seed, stream). Uniforms use the top
/// 53 bits; normals use the Box–Muller transform, so every draw depends only
/// on the seed and the call sequence.
class Rng {
 public:
  static constexpr const char* kDescription = "mt19937_64 seeded via splitmix64; 53-bit uniforms; Box-Muller normals";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), eng_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  /// Independent generator for a sub-task, derived from the seed only.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream + 1); }

  std::uint64_t next_u64() { return eng_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace conecg
