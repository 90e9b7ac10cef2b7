#pragma once

// Reference values computed independently of the library code paths.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace oracle {

// max of u^T Q u + 2 q^T u + r over |u| <= 1 for Q symmetric PSD.
//
// The maximum sits on the sphere with multiplier lambda >= lambda_max(Q) and
// (Q - lambda) u = -q. Eliminating u gives the quadratic eigenproblem
// ((Q - lambda)^2 - q q^T) w = 0, linearized as [[Q, -I], [-q q^T, Q]]; the
// optimal lambda is its largest real eigenvalue.
inline double ball_max_convex_quadratic(const Eigen::MatrixXd& Q, const Eigen::VectorXd& q, double r) {
  const Eigen::Index n = Q.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(Q);
  const double top = sym.eigenvalues()(n - 1);
  if (q.norm() <= 1e-14 * (1.0 + Q.norm())) return top + r;
  Eigen::MatrixXd M(2 * n, 2 * n);
  M << Q, -Eigen::MatrixXd::Identity(n, n), -q * q.transpose(), Q;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  double lambda = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real()))) lambda = std::max(lambda, z.real());
  }
  const Eigen::MatrixXd shifted = Q - lambda * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd u = -shifted.fullPivLu().solve(q);
  return u.dot(Q * u) + 2.0 * q.dot(u) + r;
}

// sup of |A y + b| over |y - x| <= eps.
inline double affine_norm_ball_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                                   double eps) {
  const Eigen::VectorXd v = A * x + b;
  const Eigen::MatrixXd B = eps * A;
  return std::sqrt(ball_max_convex_quadratic(B.transpose() * B, B.transpose() * v, v.squaredNorm()));
}

// sup of y^T H y + 2 c^T y + d over |y - x| <= eps, H PSD.
inline double quadratic_ball_max(const Eigen::MatrixXd& H, const Eigen::VectorXd& c, double d,
                                 const Eigen::VectorXd& x, double eps) {
  const double fx = x.dot(H * x) + 2.0 * c.dot(x) + d;
  return ball_max_convex_quadratic(eps * eps * H, eps * (H * x + c), fx);
}

// Minimizer of the regularized intro function.
inline double intro_alpha(double eps) { return (1.0 + 2.0 * eps - std::sqrt(1.0 + 8.0 * eps)) / 2.0; }

// Pseudospectral abscissa of [[0, 1], [0, 0]]: on the real axis sigma_min(x I - J) = eps
// gives (x^2 - eps^2)^2 = eps^2.
inline double jordan2_abscissa(double eps) { return std::sqrt(eps * (1.0 + eps)); }

}  // namespace oracle
