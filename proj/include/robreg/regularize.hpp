#pragma once

// The eps-robust regularization fbar_eps(x) = sup{ f(y) : |y - x| <= eps, y in X }.
//
// Exact oracles cover quadratics, affine norms, 1-D piecewise functions and
// the spectral functions; everything else goes through a sampling search that
// returns a certified lower bound (the value at a feasible point it found).

#include <cstdint>

#include "robreg/common.hpp"
#include "robreg/domain.hpp"
#include "robreg/function_model.hpp"
#include "robreg/parallel.hpp"
#include "robreg/profile.hpp"

namespace robreg {

struct SearchConfig {
  std::size_t samples = 10000;     // N uniform samples of the ball (the centre is always sample 0)
  std::size_t refine_starts = 4;   // K best samples refined locally
  int coordinate_sweeps = 20;      // M sweeps of coordinate line maximization per start
  int polish_iterations = 200;     // projected-gradient steps after the sweeps
  std::uint64_t seed = 1;
  /// Relative tolerance used when checking search profiles for monotonicity.
  double tolerance = 1e-9;
};

struct SearchResult {
  double value = 0.0;
  Vec argmax;
  std::size_t feasible_samples = 0;
};

/// Maximizer of y^T H y + 2 c^T y + d over the closed ball B_eps(x), H
/// symmetric positive semidefinite. The boundary multiplier nu >= lambda_max(H)
/// solves ||(nu I - H)^-1 (H x + c)|| = eps by safeguarded bisection; the hard
/// case (gradient orthogonal to the top eigenspace) takes an explicit
/// eigenvector step.
struct BallQuadraticMax {
  double value = 0.0;
  Vec argmax;
  double multiplier = 0.0;
  bool hard_case = false;
};

BallQuadraticMax maximize_quadratic_on_ball(const Mat& H, const Vec& c, double d, const Vec& x, double eps);

/// Exact robust value of x^T H x + 2 c^T x + d. Throws DomainError if H is not PD.
double robust_value_quadratic(const Mat& H, const Vec& c, double d, const Vec& x, double eps);

/// Exact robust value of ||A x + b||_2 (square root of the ball maximum of ||A y + b||^2).
double robust_value_affine_norm(const Mat& A, const Vec& b, const Vec& x, double eps);

struct IntervalConfig {
  int scan_points = 1024;        // coarse scan per piece segment
  double refine_tol = 1e-12;     // golden-section bracket width
};

/// Exact max of a 1-D piecewise function over [x - eps, x + eps] clipped to
/// the domain (FullSpace, Box or Ball in 1-D). Candidates: clipped endpoints,
/// breakpoints (both one-sided values), and the interior maximizer of each
/// piece found by a scan plus golden-section refinement.
double robust_value_piecewise1d(const Piecewise1DFn& f, const DomainModel& X, double x, double eps,
                                const IntervalConfig& cfg = {});

/// Multistart lower bound on the robust value. Deterministic given cfg.seed,
/// and independent of the execution policy.
SearchResult robust_value_search(const PointFn& f, const DomainModel& X, const Vec& x, double eps,
                                 const SearchConfig& cfg, Exec exec = default_exec());
SearchResult robust_value_search(const FunctionModel& f, const DomainModel& X, const Vec& x, double eps,
                                 const SearchConfig& cfg, Exec exec = default_exec());

/// Chooses the best available method per (model, domain, x, eps) and
/// evaluates fbar_eps. eps == 0 returns f(x).
class RobustEvaluator {
 public:
  RobustEvaluator(FunctionModel model, DomainModel domain, SearchConfig cfg = {}, Exec exec = default_exec());

  double value(const Vec& x, double eps) const;
  ValueMethod method(const Vec& x, double eps) const;

  PointFn at(double eps) const;
  ProfileFn profile(const Vec& x) const;

  const FunctionModel& model() const { return model_; }
  const DomainModel& domain() const { return domain_; }
  const SearchConfig& config() const { return cfg_; }

 private:
  FunctionModel model_;
  DomainModel domain_;
  SearchConfig cfg_;
  Exec exec_;
};

/// g_x on a grid. Decreases beyond tolerance are flagged, not repaired.
RobustProfile epsilon_profile(const FunctionModel& model, const DomainModel& X, const Vec& x, const RadiusSpec& grid,
                              const SearchConfig& cfg = {}, Exec exec = default_exec());

}  // namespace robreg
