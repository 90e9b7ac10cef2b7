#include "robreg/domain.hpp"

#include <cmath>

namespace robreg {

DomainModel::DomainModel(Variant v) : v_(std::move(v)) {}

DomainModel DomainModel::box(Vec lower, Vec upper) {
  require_dim(upper, lower.size(), "box: upper");
  if ((upper.array() < lower.array()).any()) throw ConfigError("box: lower bound exceeds upper bound");
  return DomainModel(Box{std::move(lower), std::move(upper)});
}

DomainModel DomainModel::ball(Vec center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("ball: radius must be positive");
  return DomainModel(Ball{std::move(center), radius});
}

DomainModel DomainModel::polytope(Mat A, Vec b) {
  require_dim(b, A.rows(), "polytope: b");
  return DomainModel(Polytope{std::move(A), std::move(b)});
}

DomainModel DomainModel::smooth_equality(std::vector<expr::Expression> constraints) {
  if (constraints.empty()) throw ConfigError("smooth_equality: need at least one constraint");
  const int n = constraints.front().dimension();
  for (const auto& c : constraints) {
    if (c.dimension() != n) throw DimensionError("smooth_equality: constraints disagree on dimension");
  }
  return DomainModel(SmoothEquality{std::move(constraints), n});
}

DomainModel DomainModel::affine_set(Vec point, Mat basis) {
  require_dim(point, basis.rows(), "affine_set: point");
  Mat q;
  if (basis.cols() > 0) {
    Eigen::HouseholderQR<Mat> qr(basis);
    q = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
  } else {
    q = Mat(basis.rows(), 0);
  }
  return DomainModel(AffineSet{std::move(point), std::move(q)});
}

DomainModel DomainModel::dyadic_epigraph(int depth) {
  if (depth < 1 || depth > 60) throw ConfigError("dyadic_epigraph: depth must be in [1, 60]");
  return DomainModel(DyadicEpigraph{depth});
}

DomainModel DomainModel::union_of(std::vector<DomainModel> members) {
  if (members.empty()) throw ConfigError("union: need at least one member");
  const int n = members.front().dimension();
  for (const auto& m : members) {
    if (m.dimension() != n) throw DimensionError("union: members disagree on dimension");
  }
  return DomainModel(UnionDomain{std::move(members)});
}

int DomainModel::dimension() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FullSpace>) {
          return d.n;
        } else if constexpr (std::is_same_v<T, Box>) {
          return static_cast<int>(d.lower.size());
        } else if constexpr (std::is_same_v<T, Ball>) {
          return static_cast<int>(d.center.size());
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return static_cast<int>(d.A.cols());
        } else if constexpr (std::is_same_v<T, SmoothEquality>) {
          return d.n;
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          return static_cast<int>(d.point.size());
        } else if constexpr (std::is_same_v<T, DyadicEpigraph>) {
          return 2;
        } else {
          return d.members.front().dimension();
        }
      },
      v_);
}

bool DomainModel::contains(const Vec& x) const {
  if (x.size() != dimension()) return false;
  constexpr double tol = kMembershipTol;
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FullSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          return ((x - d.lower).array() >= -tol).all() && ((d.upper - x).array() >= -tol).all();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - d.center).norm() <= d.radius + tol;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return ((d.A * x - d.b).array() <= tol).all();
        } else if constexpr (std::is_same_v<T, SmoothEquality>) {
          try {
            return constraint_residual(d, x).cwiseAbs().maxCoeff() <= tol;
          } catch (const DomainError&) {
            return false;
          }
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          const Vec r = x - d.point;
          return (r - d.basis * (d.basis.transpose() * r)).norm() <= tol;
        } else if constexpr (std::is_same_v<T, DyadicEpigraph>) {
          return x[1] >= dyadic::value(x[0], d.depth) - tol;
        } else {
          for (const auto& m : d.members) {
            if (m.contains(x)) return true;
          }
          return false;
        }
      },
      v_);
}

bool DomainModel::is_convex() const {
  return std::holds_alternative<FullSpace>(v_) || std::holds_alternative<Box>(v_) ||
         std::holds_alternative<Ball>(v_) || std::holds_alternative<Polytope>(v_) ||
         std::holds_alternative<AffineSet>(v_);
}

bool DomainModel::contains_ball(const Vec& center, double radius) const {
  if (center.size() != dimension()) return false;
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FullSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          return ((center.array() - radius) >= d.lower.array()).all() &&
                 ((center.array() + radius) <= d.upper.array()).all();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (center - d.center).norm() + radius <= d.radius;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          const Vec slack = d.b - d.A * center - radius * d.A.rowwise().norm();
          return (slack.array() >= 0.0).all();
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          return d.basis.cols() == d.point.size();
        } else {
          return false;
        }
      },
      v_);
}

std::string DomainModel::kind_name() const {
  static constexpr const char* names[] = {"full_space", "box", "ball", "polytope", "smooth_equality",
                                          "affine_set", "dyadic_epigraph", "union"};
  return names[v_.index()];
}

Vec constraint_residual(const SmoothEquality& s, const Vec& x) {
  Vec r(static_cast<Eigen::Index>(s.constraints.size()));
  for (std::size_t k = 0; k < s.constraints.size(); ++k) r[static_cast<Eigen::Index>(k)] = s.constraints[k].evaluate(x);
  return r;
}

Mat constraint_jacobian(const SmoothEquality& s, const Vec& x) {
  const auto m = static_cast<Eigen::Index>(s.constraints.size());
  Mat J(m, x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (constraint_residual(s, xp) - constraint_residual(s, xm)) / (2.0 * h);
  }
  return J;
}

namespace dyadic {

namespace {

// Piece k lives on [2^-(k+1), 2^-k] with exponent 1 + 2^-k.
double piece_value(int k, double x) {
  const double top = std::ldexp(1.0, -k);
  const double p = 1.0 + std::ldexp(1.0, -k);
  const double base = std::max(0.0, 2.0 - std::ldexp(x, k + 1));
  return top - 0.5 * top * std::pow(base, p);
}

double piece_slope(int k, double x) {
  const double p = 1.0 + std::ldexp(1.0, -k);
  const double base = std::max(0.0, 2.0 - std::ldexp(x, k + 1));
  return p * std::pow(base, p - 1.0);
}

// Piece containing points just to the right (right = true) or left of x > 0.
// Returns -1 for the linear tail below 2^-depth and -2 for the flat part above 1.
int piece_at(double x, int depth, bool right) {
  const double floor_scale = std::ldexp(1.0, -depth);
  if (right ? x >= 1.0 : x > 1.0) return -2;
  if (right ? x < floor_scale : x <= floor_scale) return -1;
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  int k = -e;                          // x in [2^-(k+1), 2^-k)
  if (!right && m == 0.5) k += 1;      // x == 2^-(k+1) exactly: left neighbour is the deeper piece
  return k;
}

double slope_for(int k, double x) {
  if (k == -2) return 0.0;
  if (k == -1) return 1.0;
  return piece_slope(k, x);
}

double positive_right(double x, int depth) { return slope_for(piece_at(x, depth, true), x); }
double positive_left(double x, int depth) { return slope_for(piece_at(x, depth, false), x); }

}  // namespace

double value(double x, int depth) {
  const double a = std::abs(x);
  if (a >= 1.0) return 1.0;
  if (a <= std::ldexp(1.0, -depth)) return a;
  int e = 0;
  std::frexp(a, &e);
  return piece_value(-e, a);
}

double right_derivative(double x, int depth) {
  if (x == 0.0) return 1.0;
  if (x > 0.0) return positive_right(x, depth);
  return -positive_left(-x, depth);
}

double left_derivative(double x, int depth) {
  if (x == 0.0) return -1.0;
  if (x > 0.0) return positive_left(x, depth);
  return -positive_right(-x, depth);
}

}  // namespace dyadic

}  // namespace robreg
