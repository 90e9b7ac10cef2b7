#pragma once

#include <string>
#include <variant>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/expr.hpp"

namespace robreg {

class DomainModel;

struct FullSpace {
  int n = 0;
};

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// { x : A x <= b } row-wise.
struct Polytope {
  Mat A;
  Vec b;
};

/// { x : h_k(x) = 0 for all k }. Jacobians come from central differences.
struct SmoothEquality {
  std::vector<expr::Expression> constraints;
  int n = 0;
};

/// point + span(basis); basis columns orthonormal.
struct AffineSet {
  Vec point;
  Mat basis;
};

/// Epigraph of the even dyadic function whose graph is concave on every
/// [2^-(k+1), 2^-k] and passes through 2^-k (1,1). Pieces deeper than `depth`
/// are replaced by the line f(x) = |x|; for |x| >= 1, f = 1.
struct DyadicEpigraph {
  int depth = 12;
};

struct UnionDomain {
  std::vector<DomainModel> members;
};

class DomainModel {
 public:
  using Variant =
      std::variant<FullSpace, Box, Ball, Polytope, SmoothEquality, AffineSet, DyadicEpigraph, UnionDomain>;

  static constexpr double kMembershipTol = 1e-12;

  DomainModel(Variant v);  // NOLINT: implicit from any variant member

  static DomainModel full_space(int n) { return DomainModel(FullSpace{n}); }
  static DomainModel box(Vec lower, Vec upper);
  static DomainModel ball(Vec center, double radius);
  static DomainModel polytope(Mat A, Vec b);
  static DomainModel smooth_equality(std::vector<expr::Expression> constraints);
  /// Orthonormalizes the basis columns.
  static DomainModel affine_set(Vec point, Mat basis);
  static DomainModel dyadic_epigraph(int depth);
  static DomainModel union_of(std::vector<DomainModel> members);

  int dimension() const;
  bool contains(const Vec& x) const;
  /// Convex classes: FullSpace, Box, Ball, Polytope, AffineSet.
  bool is_convex() const;
  /// True when B_r(center) is certainly inside the set.
  bool contains_ball(const Vec& center, double radius) const;
  std::string kind_name() const;

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  Variant v_;
};

Mat constraint_jacobian(const SmoothEquality& s, const Vec& x);
Vec constraint_residual(const SmoothEquality& s, const Vec& x);

namespace dyadic {
double value(double x, int depth);
/// One-sided derivatives of the dyadic function.
double left_derivative(double x, int depth);
double right_derivative(double x, int depth);
}  // namespace dyadic

}  // namespace robreg
