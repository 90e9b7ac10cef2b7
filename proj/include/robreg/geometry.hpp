#pragma once

// Tangent and normal cones of the domain classes and the diagnostics built on
// them: nearly radial, nearly convex and prox-regular ratios, the normal-cone
// bound on the graphical modulus, and the Lipschitz upper-bound check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/cones.hpp"
#include "robreg/domain.hpp"
#include "robreg/function_model.hpp"
#include "robreg/parallel.hpp"
#include "robreg/regularize.hpp"

namespace robreg::geom {

/// Active-constraint tolerance for polytopes: |a_i^T x - b_i| <= 1e-9 (1 + |b_i|).
double active_tolerance(double b);

/// Exact tangent cone of X at x. Throws DomainError when x is not in X.
/// Unions give the union of the cones of the members containing x.
TangentCone tangent_cone(const DomainModel& X, const Vec& x);

/// Polar of the tangent cone (regular classes). Throws Error for unions.
NormalCone normal_cone(const DomainModel& X, const Vec& x);

/// dist(y, x + T_X(x)) / |x - y|^power, power 1 or 2.
double tangent_ratio(const DomainModel& X, const Vec& x, const Vec& y, int power = 1);

struct ShellRow {
  double radius = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

struct WitnessRow {
  Vec x;
  Vec y;
  double ratio = 0.0;
};

struct ShellConfig {
  std::vector<double> radii{1e-1, 1e-2, 1e-3};  // decreasing
  std::size_t samples_per_shell = 400;
  std::uint64_t seed = 1;
  double threshold = 0.05;
};

struct GeometryReport {
  std::string diagnostic;
  std::vector<ShellRow> shells;
  std::vector<WitnessRow> witnesses;
  bool pass = false;
};

/// Per shell, max over sampled x in X with |x - x̄| in [r/2, r] of
/// dist(x̄, x + T_X(x)) / |x̄ - x|; witness points are reported separately.
/// Passes when shell maxima do not increase and the last is <= threshold.
GeometryReport nearly_radial_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                     const std::vector<Vec>& witnesses = {});

/// Pairs (x, y) of X within radius r of x̄, ratio dist(y, x + T_X(x)) / |x - y|.
/// Passes when shell maxima do not increase and the last is <= threshold.
GeometryReport nearly_convex_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                     const std::vector<std::pair<Vec, Vec>>& witnesses = {});

/// As nearly_convex_profile with |x - y|^2. Passes when the last two shell
/// maxima are finite and <= threshold (here a bound on the ratio).
GeometryReport prox_regular_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                    const std::vector<std::pair<Vec, Vec>>& witnesses = {});

struct NormalBound {
  double value = 0.0;
  bool infinite = false;
};

/// |x - y| / d(x - y, N_X(y)); infinite when x - y is in N_X(y).
NormalBound normal_cone_lip_bound(const DomainModel& X, const Vec& x, const Vec& y);

struct LipBoundRow {
  double eps = 0.0;
  double lip_fbar = 0.0;    // lip_direct of fbar_eps at x̄
  double bound = 0.0;       // max Lipschitz modulus of f over B_eps(x̄)
  bool exact_bound = false; // bound from the gradient-norm oracle
  bool pass = false;
};

struct LipBoundReport {
  std::vector<LipBoundRow> rows;
  double threshold = 0.05;
  bool pass = false;  // at the smallest eps: lip_fbar <= (1 + threshold) * bound
};

struct LipBoundConfig {
  std::vector<double> relative_radii{1e-2, 1e-3};  // lip shells as fractions of eps
  std::size_t pairs_per_radius = 2000;
  std::size_t bound_points = 64;  // sampled centers for the bound on non-quadratic models
  std::uint64_t seed = 1;
  double threshold = 0.05;
  SearchConfig search;
};

/// lip of fbar_eps at x̄ against the largest Lipschitz modulus of f on
/// B_eps(x̄) ∩ X. Quadratics (and affine expressions through sampling) use
/// the exact maximum gradient norm max |2Hy + 2c| over the ball.
LipBoundReport lip_upper_bound_check(const FunctionModel& f, const DomainModel& X, const Vec& xbar,
                                     const std::vector<double>& eps_grid, const LipBoundConfig& cfg,
                                     Exec exec = default_exec());

}  // namespace robreg::geom
