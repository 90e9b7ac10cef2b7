#include "robreg/cones.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <limits>

namespace robreg::geom {

namespace {

void check_size(Eigen::Index n, Eigen::Index facets, const char* what) {
  if (n > Cone::kMaxDimension || facets > Cone::kMaxFacets) {
    throw ConfigError(std::string(what) + ": exact projection supports n <= 4 and at most 12 facets (got n = " +
                      std::to_string(n) + ", " + std::to_string(facets) + " facets)");
  }
}

// Calls visit(subset) for every subset of {0..k-1} of size <= max_size.
template <class F>
void for_each_subset(int k, int max_size, F&& visit) {
  std::vector<int> idx;
  auto rec = [&](auto&& self, int start) -> void {
    visit(idx);
    if (static_cast<int>(idx.size()) == max_size) return;
    for (int i = start; i < k; ++i) {
      idx.push_back(i);
      self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
}

Mat rows_of(const Mat& A, const std::vector<int>& idx) {
  Mat S(static_cast<Eigen::Index>(idx.size()), A.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) S.row(static_cast<Eigen::Index>(r)) = A.row(idx[r]);
  return S;
}

Mat cols_of(const Mat& R, const std::vector<int>& idx) {
  Mat S(R.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) S.col(static_cast<Eigen::Index>(c)) = R.col(idx[c]);
  return S;
}

// min ||d - v|| over { A d <= 0 }: the projection lies on the face where some
// subset S is active, d = v - A_S^T (A_S A_S^T)^+ A_S v; take the nearest
// feasible candidate.
Vec project_halfspaces(const Mat& A, const Vec& v) {
  check_size(A.cols(), A.rows(), "halfspace cone");
  const double tol = 1e-12 * (1.0 + v.norm()) * (1.0 + A.cwiseAbs().maxCoeff());
  Vec best;
  double best_d = std::numeric_limits<double>::infinity();
  for_each_subset(static_cast<int>(A.rows()), static_cast<int>(A.cols()), [&](const std::vector<int>& S) {
    Vec d = v;
    if (!S.empty()) {
      const Mat AS = rows_of(A, S);
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(AS);
      d = v - cod.pseudoInverse() * (AS * v);
    }
    if (A.rows() > 0 && (A * d).maxCoeff() > tol) return;
    const double dist = (d - v).norm();
    if (dist < best_d) {
      best_d = dist;
      best = d;
    }
  });
  return best;
}

// min ||R lambda - v|| over lambda >= 0: the optimal support is a subset of at
// most n generators whose unconstrained least-squares coefficients are >= 0.
Vec project_generators(const Mat& R, const Vec& v) {
  check_size(R.rows(), R.cols(), "generator cone");
  Vec best = Vec::Zero(v.size());
  double best_d = v.norm();
  for_each_subset(static_cast<int>(R.cols()), static_cast<int>(R.rows()), [&](const std::vector<int>& S) {
    if (S.empty()) return;
    const Mat RS = cols_of(R, S);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(RS);
    const Vec lambda = cod.solve(v);
    if (lambda.minCoeff() < -1e-14 * (1.0 + lambda.cwiseAbs().maxCoeff())) return;
    const Vec p = RS * lambda.cwiseMax(0.0);
    const double dist = (p - v).norm();
    if (dist < best_d) {
      best_d = dist;
      best = p;
    }
  });
  return best;
}

}  // namespace

Cone::Cone(Variant v) : v_(std::move(v)) {}

Cone Cone::subspace(const Mat& basis) {
  if (basis.cols() == 0) return Cone(ConeSubspace{basis});
  Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > 1e-12 * s[0]) ++rank;
  return Cone(ConeSubspace{svd.matrixU().leftCols(rank)});
}

Cone Cone::halfspaces(Mat A) {
  if (A.cols() == 0) throw DimensionError("halfspace cone: zero dimension");
  return Cone(ConeHalfspaces{std::move(A)});
}

Cone Cone::generators(Mat R) {
  if (R.rows() == 0) throw DimensionError("generator cone: zero dimension");
  return Cone(ConeGenerators{std::move(R)});
}

Cone Cone::union_of(std::vector<Cone> members) {
  if (members.empty()) throw ConfigError("cone union: need at least one member");
  for (const auto& m : members) {
    if (m.dimension() != members.front().dimension()) throw DimensionError("cone union: dimensions differ");
  }
  if (members.size() == 1) return members.front();
  return Cone(ConeUnion{std::move(members)});
}

int Cone::dimension() const {
  return std::visit(
      [](const auto& c) -> int {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConeFull>) {
          return c.n;
        } else if constexpr (std::is_same_v<T, ConeSubspace>) {
          return static_cast<int>(c.basis.rows());
        } else if constexpr (std::is_same_v<T, ConeHalfspaces>) {
          return static_cast<int>(c.A.cols());
        } else if constexpr (std::is_same_v<T, ConeGenerators>) {
          return static_cast<int>(c.R.rows());
        } else {
          return c.members.front().dimension();
        }
      },
      v_);
}

std::string Cone::kind_name() const {
  static constexpr const char* names[] = {"full", "subspace", "halfspaces", "generators", "union"};
  return names[v_.index()];
}

Vec Cone::project(const Vec& v) const {
  require_dim(v, dimension(), "cone projection");
  return std::visit(
      [&](const auto& c) -> Vec {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConeFull>) {
          return v;
        } else if constexpr (std::is_same_v<T, ConeSubspace>) {
          if (c.basis.cols() == 0) return Vec::Zero(v.size());
          return c.basis * (c.basis.transpose() * v);
        } else if constexpr (std::is_same_v<T, ConeHalfspaces>) {
          return project_halfspaces(c.A, v);
        } else if constexpr (std::is_same_v<T, ConeGenerators>) {
          return project_generators(c.R, v);
        } else {
          Vec best;
          double best_d = std::numeric_limits<double>::infinity();
          for (const auto& m : c.members) {
            const Vec p = m.project(v);
            const double d = (p - v).norm();
            if (d < best_d) {
              best_d = d;
              best = p;
            }
          }
          return best;
        }
      },
      v_);
}

Cone Cone::polar() const {
  return std::visit(
      [&](const auto& c) -> Cone {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConeFull>) {
          return Cone::zero(c.n);
        } else if constexpr (std::is_same_v<T, ConeSubspace>) {
          const Eigen::Index n = c.basis.rows();
          if (c.basis.cols() == 0) return Cone::full(static_cast<int>(n));
          const Mat P = Mat::Identity(n, n) - c.basis * c.basis.transpose();
          return Cone::subspace(P);
        } else if constexpr (std::is_same_v<T, ConeHalfspaces>) {
          return Cone::generators(c.A.transpose());
        } else if constexpr (std::is_same_v<T, ConeGenerators>) {
          return Cone::halfspaces(c.R.transpose());
        } else {
          throw Error("polar of a union of cones is not supported");
        }
      },
      v_);
}

Vec project_generators_iterative(const Mat& R, const Vec& v, int iterations) {
  // Projected gradient on 0.5 ||R lambda - v||^2 with step 1 / ||R||^2.
  Eigen::JacobiSVD<Mat> svd(R);
  const double L = std::max(1e-300, svd.singularValues()(0) * svd.singularValues()(0));
  Vec lambda = Vec::Zero(R.cols());
  for (int it = 0; it < iterations; ++it) {
    lambda = (lambda - (R.transpose() * (R * lambda - v)) / L).cwiseMax(0.0);
  }
  return R * lambda;
}

}  // namespace robreg::geom
