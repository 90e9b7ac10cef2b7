#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "robreg/common.hpp"

namespace robreg {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-seeded generator. Every sample index gets its own stream derived
/// from (seed, stream, index), so results never depend on evaluation order or
/// on how many samples were drawn before. Uses its own uniform/normal
/// transforms so output is identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t state) : state_(state) {}

  static Rng for_index(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)) + index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec normal_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform on the unit sphere in R^n.
  Vec unit_direction(Eigen::Index n) {
    for (;;) {
      Vec v = normal_vector(n);
      const double norm = v.norm();
      if (norm > 1e-300) return v / norm;
    }
  }

  /// Uniform in the closed unit ball: Gaussian direction times U^(1/n).
  Vec unit_ball(Eigen::Index n) {
    Vec d = unit_direction(n);
    return d * std::pow(uniform(), 1.0 / static_cast<double>(n));
  }

 private:
  std::uint64_t state_;
};

}  // namespace robreg
