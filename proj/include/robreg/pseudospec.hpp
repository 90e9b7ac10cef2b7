#pragma once

// Spectral and pseudospectral abscissa/radius.
//
// The perturbation norm on matrix space is the operator 2-norm over complex
// perturbations, so the eps-pseudospectrum is {z : sigma_min(zI - A) <= eps}.
// A boundary point is reached by a rank-one perturbation, so the Frobenius
// ball gives the same regularization.

#include <complex>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/parallel.hpp"
#include "robreg/profile.hpp"

namespace robreg::pseudo {

using Complex = std::complex<double>;

enum class Quantity { Abscissa, Radius };

struct GridConfig {
  int resolution = 256;          // points per axis (>= 32)
  double refine_tol = 1e-14;     // absolute tolerance of the ray bisection
  int max_window_expansions = 40;
};

struct Query {
  CMat A;
  double eps = 0.0;
  Quantity quantity = Quantity::Abscissa;
  GridConfig grid;
};

struct Result {
  double value = 0.0;
  Complex arg{0.0, 0.0};   // point attaining the value
  std::size_t evaluations = 0;
  int window_expansions = 0;
};

std::vector<Complex> eigenvalues(const CMat& A);
double spectral_abscissa(const CMat& A);
double spectral_radius(const CMat& A);

/// Smallest singular value of zI - A.
double sigma_min_resolvent(const CMat& A, Complex z);

/// sup{Re z : sigma_min(zI - A) <= eps}. eps = 0 returns the spectral abscissa.
Result pseudospectral_abscissa(const CMat& A, double eps, const GridConfig& grid = {},
                               Exec exec = default_exec());
/// sup{|z| : sigma_min(zI - A) <= eps}. eps = 0 returns the spectral radius.
Result pseudospectral_radius(const CMat& A, double eps, const GridConfig& grid = {},
                             Exec exec = default_exec());
Result compute(const Query& q, Exec exec = default_exec());

RobustProfile spectral_epsilon_profile(const CMat& A, const RadiusSpec& grid, Quantity quantity,
                                       const GridConfig& cfg = {}, Exec exec = default_exec());

}  // namespace robreg::pseudo
