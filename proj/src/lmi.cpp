#include "robreg/lmi.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace robreg::lmi {

namespace {

void check_norm(const NormInstance& inst) {
  if (inst.A.rows() == 0 || inst.A.cols() == 0) throw DimensionError("norm LMI: A must be non-empty");
  require_dim(inst.b, inst.A.rows(), "norm LMI: b");
  require_dim(inst.x, inst.A.cols(), "norm LMI: x");
  if (!(inst.eps > 0.0)) throw ConfigError("norm LMI: eps must be positive");
}

void check_quad(const QuadInstance& inst) {
  if (inst.H.rows() != inst.H.cols() || inst.H.rows() == 0) throw DimensionError("quad LMI: H must be square");
  require_dim(inst.c, inst.H.rows(), "quad LMI: c");
  require_dim(inst.x, inst.H.rows(), "quad LMI: x");
  if (!(inst.eps > 0.0)) throw ConfigError("quad LMI: eps must be positive");
}

double sigma_max(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

// [[s I_m, v, eps B], [v^T, s - mu, 0], [eps B^T, 0, mu I_n]].
BlockSymMatrix assemble(const Vec& v, const Mat& B, double eps, double s, double mu, const char* lead) {
  const Eigen::Index m = B.rows(), n = B.cols(), N = m + 1 + n;
  BlockSymMatrix out;
  out.M = Mat::Zero(N, N);
  out.M.topLeftCorner(m, m).diagonal().setConstant(s);
  out.M.block(0, m, m, 1) = v;
  out.M.block(m, 0, 1, m) = v.transpose();
  out.M.block(0, m + 1, m, n) = eps * B;
  out.M.block(m + 1, 0, n, m) = eps * B.transpose();
  out.M(m, m) = s - mu;
  out.M.bottomRightCorner(n, n).diagonal().setConstant(mu);
  out.blocks = {{std::string(lead) + " I", 0, 0, m, m},
                {"center", 0, m, m, 1},
                {"eps scale", 0, m + 1, m, n},
                {std::string(lead) + " - mu", m, m, 1, 1},
                {"mu I", m + 1, m + 1, n, n}};
  return out;
}

template <class F>
double golden_max(F&& f, double a, double b, int iterations, double* arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  *arg = fc >= fd ? c : d;
  return std::max(fc, fd);
}

template <class Feasible>
LmiValue bisect(double lo, double hi, double tol, Feasible&& feasible) {
  if (!feasible(hi)) {
    throw NumericalError("LMI bisection: upper end t = " + std::to_string(hi) + " is infeasible (bracket [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "])");
  }
  LmiValue out;
  while (hi - lo > tol && out.bisections < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? hi : lo) = mid;
    ++out.bisections;
  }
  out.lo = lo;
  out.hi = hi;
  out.value = 0.5 * (lo + hi);
  return out;
}

}  // namespace

double BlockSymMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("LMI: eigensolver failed");
  return es.eigenvalues()(0);
}

double psd_tolerance(const Mat& M) { return 1e-9 * (1.0 + M.cwiseAbs().maxCoeff()); }

BlockSymMatrix build_norm_lmi(const NormInstance& inst, double t, double mu) {
  check_norm(inst);
  return assemble(inst.A * inst.x + inst.b, inst.A, inst.eps, t, mu, "t");
}

QuadFactors quad_factors(const Mat& H, const Vec& c) {
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff())) {
    throw DomainError("quad LMI: H is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("quad LMI: eigensolver failed");
  const Vec& w = es.eigenvalues();
  if (w.minCoeff() < 1e-12) throw DomainError("quad LMI: H is not positive definite");
  const Mat& V = es.eigenvectors();
  QuadFactors f;
  f.sqrtH = V * w.cwiseSqrt().asDiagonal() * V.transpose();
  f.inv_sqrtH = V * w.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  const Vec z = f.inv_sqrtH * c;
  f.c_Hinv_c = z.squaredNorm();
  return f;
}

QuadLmi build_quad_lmi(const QuadInstance& inst, double t, double s, double mu) {
  check_quad(inst);
  const QuadFactors f = quad_factors(inst.H, inst.c);
  const Vec h = f.sqrtH * inst.x + f.inv_sqrtH * inst.c;
  QuadLmi out;
  out.block = assemble(h, f.sqrtH, inst.eps, s, mu, "s");
  out.residual = t - s * s + f.c_Hinv_c - inst.d;
  return out;
}

Feasibility feasible_norm(const NormInstance& inst, double t, int iterations) {
  check_norm(inst);
  if (!std::isfinite(t)) throw ConfigError("norm LMI: t must be finite");
  const Vec v = inst.A * inst.x + inst.b;
  const double mu_hi = std::max(0.0, t) + inst.eps * inst.eps * std::pow(sigma_max(inst.A), 2) + 1.0;
  auto lam = [&](double mu) { return assemble(v, inst.A, inst.eps, t, mu, "t").min_eigenvalue(); };
  Feasibility out;
  out.lambda_min = golden_max(lam, 0.0, mu_hi, iterations, &out.mu);
  out.tolerance = psd_tolerance(assemble(v, inst.A, inst.eps, t, out.mu, "t").M);
  out.feasible = out.lambda_min >= -out.tolerance;
  return out;
}

Feasibility feasible_quad(const QuadInstance& inst, const QuadFactors& fac, double t, int iterations) {
  check_quad(inst);
  if (!std::isfinite(t)) throw ConfigError("quad LMI: t must be finite");
  Feasibility out;
  const double room = t - inst.d + fac.c_Hinv_c;
  if (room < 0.0) {
    out.lambda_min = room;
    return out;
  }
  const Vec h = fac.sqrtH * inst.x + fac.inv_sqrtH * inst.c;
  out.s = std::sqrt(room);
  const double mu_hi = out.s + inst.eps * inst.eps * std::pow(sigma_max(fac.sqrtH), 2) + 1.0;
  auto lam = [&](double mu) { return assemble(h, fac.sqrtH, inst.eps, out.s, mu, "s").min_eigenvalue(); };
  out.lambda_min = golden_max(lam, 0.0, mu_hi, iterations, &out.mu);
  out.tolerance = psd_tolerance(assemble(h, fac.sqrtH, inst.eps, out.s, out.mu, "s").M);
  out.feasible = out.lambda_min >= -out.tolerance;
  return out;
}

LmiValue robust_value_via_norm_lmi(const NormInstance& inst, double tol) {
  check_norm(inst);
  const double lo = (inst.A * inst.x + inst.b).norm();
  const double hi = lo + inst.eps * sigma_max(inst.A) + 1e-9 * (1.0 + lo);
  return bisect(lo, hi, tol, [&](double t) { return feasible_norm(inst, t).feasible; });
}

LmiValue robust_value_via_quad_lmi(const QuadInstance& inst, double tol) {
  check_quad(inst);
  const QuadFactors fac = quad_factors(inst.H, inst.c);
  const Vec h = fac.sqrtH * inst.x + fac.inv_sqrtH * inst.c;
  const double lo = inst.x.dot(inst.H * inst.x) + 2.0 * inst.c.dot(inst.x) + inst.d;
  const double r = h.norm() + inst.eps * sigma_max(fac.sqrtH);
  const double hi = r * r - fac.c_Hinv_c + inst.d + 1e-9 * (1.0 + r * r);
  const double width = tol * (1.0 + std::abs(hi));
  return bisect(lo, hi, width, [&](double t) { return feasible_quad(inst, fac, t).feasible; });
}

}  // namespace robreg::lmi
