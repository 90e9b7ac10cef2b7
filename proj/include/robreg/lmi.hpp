#pragma once

// Linear matrix inequality certificates for the robust regularization of
// ||Ax + b|| and of PD quadratics, and the value recovered by bisection.
//
// Feasibility is decided without an SDP solver: the families are affine in
// the decision scalars, so lambda_min is concave and a golden-section search
// finds its maximum.

#include <optional>
#include <string>
#include <vector>

#include "robreg/common.hpp"

namespace robreg::lmi {

struct BlockInfo {
  std::string name;
  Eigen::Index row = 0, col = 0, rows = 0, cols = 0;
};

struct BlockSymMatrix {
  Mat M;
  std::vector<BlockInfo> blocks;

  double symmetry_defect() const { return (M - M.transpose()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
};

struct NormInstance {
  Mat A;
  Vec b;
  Vec x;
  double eps = 0.0;
};

/// [[t I_m, Ax+b, eps A], [(Ax+b)^T, t-mu, 0], [eps A^T, 0, mu I_n]].
BlockSymMatrix build_norm_lmi(const NormInstance& inst, double t, double mu);

struct QuadInstance {
  Mat H;
  Vec c;
  double d = 0.0;
  Vec x;
  double eps = 0.0;
};

/// H^{1/2}, H^{-1/2} and c^T H^-1 c, from a symmetric eigendecomposition.
struct QuadFactors {
  Mat sqrtH;
  Mat inv_sqrtH;
  double c_Hinv_c = 0.0;
};
/// Throws DomainError when an eigenvalue of H is below 1e-12.
QuadFactors quad_factors(const Mat& H, const Vec& c);

struct QuadLmi {
  BlockSymMatrix block;
  double residual = 0.0;  // t - s^2 + c^T H^-1 c - d
};

/// [[s I_n, h, eps H^{1/2}], [h^T, s-mu, 0], [eps H^{1/2}, 0, mu I_n]] with
/// h = H^{1/2} x + H^{-1/2} c, plus the scalar residual of the side constraint.
QuadLmi build_quad_lmi(const QuadInstance& inst, double t, double s, double mu);

/// PSD test tolerance 1e-9 (1 + ||M||_max).
double psd_tolerance(const Mat& M);

struct Feasibility {
  bool feasible = false;
  double mu = 0.0;          // best multiplier found
  double s = 0.0;           // quad case only
  double lambda_min = 0.0;  // at the best (s, mu)
  double tolerance = 0.0;
};

/// Maximizes lambda_min(M(mu)) over mu in [0, t + eps^2 sigma_max(A)^2 + 1] by
/// golden section.
Feasibility feasible_norm(const NormInstance& inst, double t, int iterations = 120);

/// Feasibility of t for the quadratic LMI. lambda_min is nondecreasing in s
/// (s enters through a PSD direction), so s is fixed at the largest value the
/// side constraint allows and only mu is searched.
Feasibility feasible_quad(const QuadInstance& inst, const QuadFactors& fac, double t, int iterations = 120);

struct LmiValue {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  int bisections = 0;
};

/// Bisection on t over [||Ax+b||, ||Ax+b|| + eps sigma_max(A)] down to width tol.
LmiValue robust_value_via_norm_lmi(const NormInstance& inst, double tol = 1e-10);

/// Bisection on t over [h(x), (||h|| + eps ||H^{1/2}||)^2 - c^T H^-1 c + d].
LmiValue robust_value_via_quad_lmi(const QuadInstance& inst, double tol = 1e-10);

}  // namespace robreg::lmi
