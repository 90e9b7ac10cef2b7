#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/expr.hpp"

namespace robreg {

struct ExpressionFn {
  expr::Expression expression;
};

/// x^T H x + 2 c^T x + d with H symmetric positive definite.
struct QuadraticFn {
  Mat H;
  Vec c;
  double d = 0.0;
};

/// ||A x + b||_2.
struct AffineNormFn {
  Mat A;
  Vec b;
};

/// One piece of a Piecewise1DFn. Usually an expression; a callable is allowed
/// for pieces outside the language (x^(1/3)).
struct Piece1D {
  std::function<double(double)> f;
  std::string text;

  Piece1D(std::function<double(double)> fn, std::string label) : f(std::move(fn)), text(std::move(label)) {}
  Piece1D(const expr::Expression& e);  // NOLINT: implicit from expressions
  double operator()(double x) const { return f(x); }
};

/// One-dimensional function given by pieces between sorted breakpoints.
/// With k breakpoints there are k+1 pieces; piece i covers
/// [breakpoints[i-1], breakpoints[i]) and a breakpoint belongs to the piece
/// on its right. Pieces are expected to be monotone or unimodal on their
/// interval; the exact interval maximizer relies on it.
struct Piecewise1DFn {
  std::vector<double> breakpoints;
  std::vector<Piece1D> pieces;

  std::size_t piece_index(double x) const;
};

/// Spectral abscissa / radius of an n x n real matrix flattened row-major.
struct SpectralAbscissaFn {
  int n = 0;
};
struct SpectralRadiusFn {
  int n = 0;
};

/// Arbitrary callable, for functions outside the expression language
/// (x^2 sin(1/x^2), test-only constructions).
struct BlackBoxFn {
  PointFn f;
  int dimension = 1;
  std::string name;
};

class FunctionModel {
 public:
  using Variant = std::variant<ExpressionFn, QuadraticFn, AffineNormFn, Piecewise1DFn, SpectralAbscissaFn,
                               SpectralRadiusFn, BlackBoxFn>;

  static FunctionModel expression(std::string_view text, int dimension);
  static FunctionModel expression(expr::Expression e);
  /// Throws DomainError unless H is symmetric with minimum eigenvalue > 1e-10.
  static FunctionModel quadratic(Mat H, Vec c, double d);
  static FunctionModel affine_norm(Mat A, Vec b);
  /// Throws ConfigError unless breakpoints strictly increase and pieces.size() == breakpoints.size() + 1.
  static FunctionModel piecewise1d(std::vector<double> breakpoints, std::vector<Piece1D> pieces);
  static FunctionModel spectral_abscissa(int n);
  static FunctionModel spectral_radius(int n);
  static FunctionModel black_box(PointFn f, int dimension, std::string name);

  double eval(const Vec& x) const;
  double operator()(const Vec& x) const { return eval(x); }

  /// Ambient dimension (n, or n^2 for the spectral variants).
  int dimension() const;
  std::string kind_name() const;

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  PointFn as_point_fn() const;

 private:
  explicit FunctionModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Row-major flattening used by the spectral variants.
Vec flatten_row_major(const Mat& A);
Mat unflatten_row_major(const Vec& v, int n);

}  // namespace robreg
