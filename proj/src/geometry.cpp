#include "robreg/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "robreg/moduli.hpp"
#include "robreg/rng.hpp"
#include "robreg/setmap.hpp"

namespace robreg::geom {

namespace {

Cone from_rows(const std::vector<Vec>& rows, int n) {
  if (rows.empty()) return Cone::full(n);
  Mat A(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return Cone::halfspaces(std::move(A));
}

Vec row2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Cone dyadic_cone(const DyadicEpigraph& e, const Vec& x) {
  const double f = dyadic::value(x[0], e.depth);
  if (x[1] > f + 1e-12 * (1.0 + std::abs(x[1]))) return Cone::full(2);
  const double l = dyadic::left_derivative(x[0], e.depth);
  const double r = dyadic::right_derivative(x[0], e.depth);
  // Epigraph of the directional derivative: v >= r u for u >= 0, v >= l u for u <= 0.
  if (l <= r) return from_rows({row2(r, -1.0), row2(l, -1.0)}, 2);
  return Cone::union_of({from_rows({row2(-1.0, 0.0), row2(r, -1.0)}, 2), from_rows({row2(1.0, 0.0), row2(l, -1.0)}, 2)});
}

// Points of X with |p - x̄| in [r/2, r], the center excluded.
std::vector<Vec> shell_points(const DomainModel& X, const Vec& xbar, double r, std::size_t n, std::uint64_t seed) {
  std::vector<Vec> out;
  PointCloud c;
  try {
    c = sample_ball_intersection(X, xbar, r, n, seed);
  } catch (const NumericalError&) {
    return out;
  }
  for (const Vec& p : c.points) {
    const double d = (p - xbar).norm();
    if (d >= 0.5 * r && d <= r * (1.0 + 1e-12)) out.push_back(p);
  }
  return out;
}

std::vector<Vec> ball_points(const DomainModel& X, const Vec& xbar, double r, std::size_t n, std::uint64_t seed) {
  std::vector<Vec> out;
  try {
    PointCloud c = sample_ball_intersection(X, xbar, r, n, seed);
    out = std::move(c.points);
  } catch (const NumericalError&) {
  }
  return out;
}

bool nonincreasing(const std::vector<ShellRow>& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].max_ratio > s[i - 1].max_ratio * (1.0 + 1e-9) + 1e-12) return false;
  }
  return true;
}

GeometryReport pair_profile(const char* name, const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                            const std::vector<std::pair<Vec, Vec>>& witnesses, int power) {
  GeometryReport rep;
  rep.diagnostic = name;
  for (std::size_t s = 0; s < cfg.radii.size(); ++s) {
    const double r = cfg.radii[s];
    const std::vector<Vec> P = ball_points(X, xbar, r, cfg.samples_per_shell, cfg.seed * 7 + 2 * s);
    const std::vector<Vec> Q = ball_points(X, xbar, r, cfg.samples_per_shell, cfg.seed * 7 + 2 * s + 1);
    ShellRow row{r, 0.0, 0};
    const std::size_t m = std::min(P.size(), Q.size());
    for (std::size_t i = 0; i < m; ++i) {
      if ((P[i] - Q[i]).norm() <= 1e-9 * r) continue;
      try {
        row.max_ratio = std::max(row.max_ratio, tangent_ratio(X, P[i], Q[i], power));
        ++row.samples;
      } catch (const DomainError&) {
      }
    }
    rep.shells.push_back(row);
  }
  for (const auto& [x, y] : witnesses) rep.witnesses.push_back({x, y, tangent_ratio(X, x, y, power)});
  return rep;
}

}  // namespace

double active_tolerance(double b) { return 1e-9 * (1.0 + std::abs(b)); }

TangentCone tangent_cone(const DomainModel& X, const Vec& x) {
  require_dim(x, X.dimension(), "tangent_cone: x");
  if (!X.contains(x)) throw DomainError("tangent_cone: point is not in the " + X.kind_name() + " domain");
  const int n = X.dimension();
  if (X.get_if<FullSpace>()) return Cone::full(n);
  if (const auto* b = X.get_if<Box>()) {
    std::vector<Vec> rows;
    for (int i = 0; i < n; ++i) {
      if (std::abs(x[i] - b->upper[i]) <= active_tolerance(b->upper[i])) rows.push_back(Vec::Unit(n, i));
      if (std::abs(x[i] - b->lower[i]) <= active_tolerance(b->lower[i])) rows.push_back(-Vec::Unit(n, i));
    }
    return from_rows(rows, n);
  }
  if (const auto* b = X.get_if<Ball>()) {
    const Vec e = x - b->center;
    if (std::abs(e.norm() - b->radius) <= active_tolerance(b->radius)) return from_rows({e}, n);
    return Cone::full(n);
  }
  if (const auto* p = X.get_if<Polytope>()) {
    std::vector<Vec> rows;
    for (Eigen::Index r = 0; r < p->A.rows(); ++r) {
      if (std::abs(p->A.row(r).dot(x) - p->b[r]) <= active_tolerance(p->b[r])) rows.push_back(p->A.row(r).transpose());
    }
    return from_rows(rows, n);
  }
  if (const auto* s = X.get_if<SmoothEquality>()) {
    const Mat J = constraint_jacobian(*s, x);
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-8 * std::max(1.0, sv[0])) ++rank;
    return Cone::subspace(svd.matrixV().rightCols(n - rank));
  }
  if (const auto* a = X.get_if<AffineSet>()) return Cone::subspace(a->basis);
  if (const auto* e = X.get_if<DyadicEpigraph>()) return dyadic_cone(*e, x);
  const auto& u = std::get<UnionDomain>(X.variant());
  std::vector<Cone> cones;
  for (const auto& m : u.members) {
    if (m.contains(x)) cones.push_back(tangent_cone(m, x));
  }
  return Cone::union_of(std::move(cones));
}

NormalCone normal_cone(const DomainModel& X, const Vec& x) { return tangent_cone(X, x).polar(); }

double tangent_ratio(const DomainModel& X, const Vec& x, const Vec& y, int power) {
  if (power != 1 && power != 2) throw ConfigError("tangent_ratio: power must be 1 or 2");
  const double d = (x - y).norm();
  if (!(d > 0.0)) throw ConfigError("tangent_ratio: x and y coincide");
  return tangent_cone(X, x).distance(y - x) / std::pow(d, power);
}

GeometryReport nearly_radial_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                     const std::vector<Vec>& witnesses) {
  GeometryReport rep;
  rep.diagnostic = "nearly_radial";
  for (std::size_t s = 0; s < cfg.radii.size(); ++s) {
    const double r = cfg.radii[s];
    ShellRow row{r, 0.0, 0};
    for (const Vec& x : shell_points(X, xbar, r, cfg.samples_per_shell, cfg.seed * 7 + s)) {
      try {
        row.max_ratio = std::max(row.max_ratio, tangent_ratio(X, x, xbar, 1));
        ++row.samples;
      } catch (const DomainError&) {
      }
    }
    rep.shells.push_back(row);
  }
  for (const Vec& x : witnesses) rep.witnesses.push_back({x, xbar, tangent_ratio(X, x, xbar, 1)});
  rep.pass = !rep.shells.empty() && nonincreasing(rep.shells) && rep.shells.back().max_ratio <= cfg.threshold;
  for (const auto& w : rep.witnesses) {
    if (w.ratio > cfg.threshold && (w.x - xbar).norm() <= cfg.radii.front()) rep.pass = false;
  }
  return rep;
}

GeometryReport nearly_convex_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                     const std::vector<std::pair<Vec, Vec>>& witnesses) {
  GeometryReport rep = pair_profile("nearly_convex", X, xbar, cfg, witnesses, 1);
  rep.pass = !rep.shells.empty() && nonincreasing(rep.shells) && rep.shells.back().max_ratio <= cfg.threshold;
  for (const auto& w : rep.witnesses) {
    if (w.ratio > cfg.threshold) rep.pass = false;
  }
  return rep;
}

GeometryReport prox_regular_profile(const DomainModel& X, const Vec& xbar, const ShellConfig& cfg,
                                    const std::vector<std::pair<Vec, Vec>>& witnesses) {
  GeometryReport rep = pair_profile("prox_regular", X, xbar, cfg, witnesses, 2);
  rep.pass = !rep.shells.empty();
  const std::size_t k = rep.shells.size();
  for (std::size_t i = k >= 2 ? k - 2 : 0; i < k; ++i) {
    if (!(rep.shells[i].max_ratio <= cfg.threshold)) rep.pass = false;
  }
  return rep;
}

NormalBound normal_cone_lip_bound(const DomainModel& X, const Vec& x, const Vec& y) {
  const Vec w = x - y;
  const double d = normal_cone(X, y).distance(w);
  NormalBound out;
  if (d <= 1e-12 * (1.0 + w.norm())) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = w.norm() / d;
  return out;
}

LipBoundReport lip_upper_bound_check(const FunctionModel& f, const DomainModel& X, const Vec& xbar,
                                     const std::vector<double>& eps_grid, const LipBoundConfig& cfg, Exec exec) {
  if (eps_grid.empty()) throw ConfigError("lip_upper_bound_check: empty radius grid");
  const RobustEvaluator ev(f, X, cfg.search, exec);
  LipBoundReport rep;
  rep.threshold = cfg.threshold;
  for (double e : eps_grid) {
    LipBoundRow row;
    row.eps = e;
    SamplingConfig sc;
    sc.radii.clear();
    for (double r : cfg.relative_radii) sc.radii.push_back(r * e);
    sc.samples_per_radius = cfg.pairs_per_radius;
    sc.seed = cfg.seed;
    row.lip_fbar = lip_direct(ev.at(e), X, xbar, sc, exec).value;
    if (const auto* q = f.get_if<QuadraticFn>()) {
      row.bound = robust_value_affine_norm(2.0 * q->H, 2.0 * q->c, xbar, e);
      row.exact_bound = true;
    } else {
      const PointFn F = f.as_point_fn();
      SamplingConfig inner;
      inner.radii = {1e-3 * e};
      inner.samples_per_radius = 200;
      const std::vector<Vec> centers = ball_points(X, xbar, e, cfg.bound_points, cfg.seed + 17);
      for (std::size_t c = 0; c < centers.size(); ++c) {
        inner.seed = cfg.seed + c;
        const ModulusEstimate m = lip_direct(F, X, centers[c], inner, exec);
        row.bound = std::max(row.bound, m.value);
      }
    }
    row.pass = row.lip_fbar <= (1.0 + cfg.threshold) * row.bound + 1e-12;
    rep.rows.push_back(row);
  }
  const auto smallest = std::min_element(rep.rows.begin(), rep.rows.end(),
                                         [](const LipBoundRow& a, const LipBoundRow& b) { return a.eps < b.eps; });
  rep.pass = smallest->pass;
  return rep;
}

}  // namespace robreg::geom
