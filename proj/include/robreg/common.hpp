#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace robreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Scalar function of a point. Moduli estimators and set diagnostics take
/// these so that both f and its regularization can be probed the same way.
using PointFn = std::function<double(const Vec&)>;

/// Scalar function of the radius at a fixed base point (the epsilon profile).
using ProfileFn = std::function<double(double)>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside the function's domain: sqrt of a negative, division by
/// zero, no piecewise guard satisfied, or a point outside the set.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure, bracket failure, empty sample set.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (CLI flags, TOML, unknown fixture names).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(const Vec& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

}  // namespace robreg
