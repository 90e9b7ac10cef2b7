#include "robreg/function_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "robreg/pseudospec.hpp"

namespace robreg {

std::size_t Piecewise1DFn::piece_index(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                                  breakpoints.begin());
}

FunctionModel FunctionModel::expression(std::string_view text, int dimension) {
  return FunctionModel(ExpressionFn{expr::Expression::parse(text, dimension)});
}

FunctionModel FunctionModel::expression(expr::Expression e) { return FunctionModel(ExpressionFn{std::move(e)}); }

FunctionModel FunctionModel::quadratic(Mat H, Vec c, double d) {
  if (H.rows() != H.cols() || H.rows() == 0) throw DimensionError("quadratic: H must be square and non-empty");
  require_dim(c, H.rows(), "quadratic: c");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff())) {
    throw DomainError("quadratic: H is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("quadratic: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 1e-10) throw DomainError("quadratic: H is not positive definite");
  return FunctionModel(QuadraticFn{std::move(H), std::move(c), d});
}

FunctionModel FunctionModel::affine_norm(Mat A, Vec b) {
  if (A.rows() == 0 || A.cols() == 0) throw DimensionError("affine_norm: A must be non-empty");
  require_dim(b, A.rows(), "affine_norm: b");
  return FunctionModel(AffineNormFn{std::move(A), std::move(b)});
}

Piece1D::Piece1D(const expr::Expression& e) : text(e.to_string()) {
  if (e.dimension() != 1) throw DimensionError("piecewise1d: pieces must be one-dimensional");
  f = [e](double x) { return e.evaluate(std::span<const double>(&x, 1)); };
}

FunctionModel FunctionModel::piecewise1d(std::vector<double> breakpoints, std::vector<Piece1D> pieces) {
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) throw ConfigError("piecewise1d: breakpoints must strictly increase");
  }
  if (pieces.size() != breakpoints.size() + 1) {
    throw ConfigError("piecewise1d: need exactly one more piece than breakpoints");
  }
  return FunctionModel(Piecewise1DFn{std::move(breakpoints), std::move(pieces)});
}

FunctionModel FunctionModel::spectral_abscissa(int n) {
  if (n < 1) throw DimensionError("spectral_abscissa: n must be positive");
  return FunctionModel(SpectralAbscissaFn{n});
}

FunctionModel FunctionModel::spectral_radius(int n) {
  if (n < 1) throw DimensionError("spectral_radius: n must be positive");
  return FunctionModel(SpectralRadiusFn{n});
}

FunctionModel FunctionModel::black_box(PointFn f, int dimension, std::string name) {
  if (!f) throw ConfigError("black_box: empty callable");
  return FunctionModel(BlackBoxFn{std::move(f), dimension, std::move(name)});
}

int FunctionModel::dimension() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExpressionFn>) {
          return m.expression.dimension();
        } else if constexpr (std::is_same_v<T, QuadraticFn>) {
          return static_cast<int>(m.H.rows());
        } else if constexpr (std::is_same_v<T, AffineNormFn>) {
          return static_cast<int>(m.A.cols());
        } else if constexpr (std::is_same_v<T, Piecewise1DFn>) {
          return 1;
        } else if constexpr (std::is_same_v<T, BlackBoxFn>) {
          return m.dimension;
        } else {
          return m.n * m.n;
        }
      },
      v_);
}

std::string FunctionModel::kind_name() const {
  static constexpr const char* names[] = {"expression", "quadratic", "affine_norm", "piecewise1d",
                                          "spectral_abscissa", "spectral_radius", "black_box"};
  return names[v_.index()];
}

double FunctionModel::eval(const Vec& x) const {
  require_dim(x, dimension(), "FunctionModel::eval");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExpressionFn>) {
          return m.expression.evaluate(x);
        } else if constexpr (std::is_same_v<T, QuadraticFn>) {
          return x.dot(m.H * x) + 2.0 * m.c.dot(x) + m.d;
        } else if constexpr (std::is_same_v<T, AffineNormFn>) {
          return (m.A * x + m.b).norm();
        } else if constexpr (std::is_same_v<T, Piecewise1DFn>) {
          return m.pieces[m.piece_index(x[0])](x[0]);
        } else if constexpr (std::is_same_v<T, SpectralAbscissaFn>) {
          return pseudo::spectral_abscissa(unflatten_row_major(x, m.n).template cast<std::complex<double>>());
        } else if constexpr (std::is_same_v<T, SpectralRadiusFn>) {
          return pseudo::spectral_radius(unflatten_row_major(x, m.n).template cast<std::complex<double>>());
        } else {
          return m.f(x);
        }
      },
      v_);
}

PointFn FunctionModel::as_point_fn() const {
  return [model = *this](const Vec& x) { return model.eval(x); };
}

Vec flatten_row_major(const Mat& A) {
  Vec v(A.size());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) v[i * A.cols() + j] = A(i, j);
  }
  return v;
}

Mat unflatten_row_major(const Vec& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionError("unflatten: size is not n^2");
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = v[i * n + j];
  }
  return A;
}

}  // namespace robreg
