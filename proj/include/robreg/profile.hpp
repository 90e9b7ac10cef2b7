#pragma once

#include <string>
#include <vector>

#include "robreg/common.hpp"

namespace robreg {

/// A single radius or a strictly increasing grid of positive radii.
class RadiusSpec {
 public:
  /// Throws ConfigError on a non-positive entry or a non-increasing grid.
  explicit RadiusSpec(std::vector<double> radii);
  static RadiusSpec single(double eps) { return RadiusSpec({eps}); }
  /// `count` log-spaced radii from lo to hi inclusive.
  static RadiusSpec log_spaced(double lo, double hi, int count);

  const std::vector<double>& values() const { return radii_; }
  std::size_t size() const { return radii_.size(); }
  double operator[](std::size_t i) const { return radii_[i]; }

 private:
  std::vector<double> radii_;
};

enum class ValueMethod { Oracle, Search };

inline const char* to_string(ValueMethod m) { return m == ValueMethod::Oracle ? "oracle" : "search"; }

/// g_x: eps -> robust value at a fixed base point, sampled on a grid.
struct RobustProfile {
  Vec x;
  std::vector<double> eps;
  std::vector<double> values;
  std::vector<ValueMethod> methods;
  /// Indices i > 0 where values[i] < values[i-1] - tolerance. Reported, never repaired.
  std::vector<std::size_t> monotonicity_violations;
  double base_value = 0.0;  // f(x)

  bool monotone() const { return monotonicity_violations.empty(); }
};

}  // namespace robreg
