#pragma once

// Closed cones in R^n: full space, subspaces, polyhedral cones given by
// halfspaces or by generators, and finite unions. Projection onto polyhedral
// cones is exact (active-set enumeration) for n <= 4 and at most 12 facets.

#include <variant>
#include <vector>

#include "robreg/common.hpp"

namespace robreg::geom {

class Cone;

struct ConeFull {
  int n = 0;
};
/// span of the columns (orthonormalized on construction). Zero columns is {0}.
struct ConeSubspace {
  Mat basis;
};
/// { d : A d <= 0 } row-wise.
struct ConeHalfspaces {
  Mat A;
};
/// { R lambda : lambda >= 0 }.
struct ConeGenerators {
  Mat R;
};
struct ConeUnion {
  std::vector<Cone> members;
};

class Cone {
 public:
  using Variant = std::variant<ConeFull, ConeSubspace, ConeHalfspaces, ConeGenerators, ConeUnion>;

  static constexpr int kMaxDimension = 4;
  static constexpr int kMaxFacets = 12;

  Cone(Variant v);  // NOLINT: implicit from any variant member

  static Cone full(int n) { return Cone(ConeFull{n}); }
  static Cone zero(int n) { return Cone(ConeSubspace{Mat(n, 0)}); }
  static Cone subspace(const Mat& basis);
  static Cone halfspaces(Mat A);
  static Cone generators(Mat R);
  static Cone union_of(std::vector<Cone> members);

  int dimension() const;
  std::string kind_name() const;

  /// Nearest point of the cone. Unions return the nearest member projection.
  /// Throws ConfigError for polyhedral cones beyond the supported size.
  Vec project(const Vec& v) const;
  double distance(const Vec& v) const { return (v - project(v)).norm(); }
  bool contains(const Vec& v, double tol = 1e-10) const { return distance(v) <= tol * (1.0 + v.norm()); }

  /// Polar cone { w : <w, d> <= 0 for all d in the cone }. Throws Error for unions.
  Cone polar() const;

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  Variant v_;
};

using TangentCone = Cone;
using NormalCone = Cone;

/// Reference projection onto {R lambda : lambda >= 0} by projected gradient on
/// lambda; slow, used to cross-check the exact projection.
Vec project_generators_iterative(const Mat& R, const Vec& v, int iterations = 20000);

}  // namespace robreg::geom
