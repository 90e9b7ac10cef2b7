#include "robreg/setmap.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <limits>

#include "robreg/rng.hpp"

namespace robreg::geom {

namespace {

bool in_ball(const Vec& p, const Vec& x, double eps) { return (p - x).norm() <= eps * (1.0 + 1e-12); }

// Row-wise facets a^T p <= b of a box or polytope.
bool facets(const DomainModel& X, Mat& A, Vec& b) {
  if (const auto* bx = X.get_if<Box>()) {
    const Eigen::Index n = bx->lower.size();
    A.resize(2 * n, n);
    b.resize(2 * n);
    A.topRows(n) = Mat::Identity(n, n);
    A.bottomRows(n) = -Mat::Identity(n, n);
    b.head(n) = bx->upper;
    b.tail(n) = -bx->lower;
    return true;
  }
  if (const auto* p = X.get_if<Polytope>()) {
    A = p->A;
    b = p->b;
    return true;
  }
  return false;
}

void sample_into(const DomainModel& X, const Vec& x, double eps, std::size_t n, std::uint64_t seed,
                 std::uint64_t stream, std::vector<Vec>& out) {
  const Eigen::Index dim = x.size();
  if (const auto* u = X.get_if<UnionDomain>()) {
    for (std::size_t m = 0; m < u->members.size(); ++m) {
      sample_into(u->members[m], x, eps, n, seed, stream * 131 + m + 1, out);
    }
    return;
  }
  if (const auto* a = X.get_if<AffineSet>()) {
    const Vec p0 = a->point + a->basis * (a->basis.transpose() * (x - a->point));
    const double d = (x - p0).norm();
    if (d > eps) return;
    const double rho = std::sqrt(std::max(0.0, eps * eps - d * d));
    const Eigen::Index k = a->basis.cols();
    if (k == 0) {
      out.push_back(p0);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = Rng::for_index(seed, stream, i);
      out.push_back(p0 + rho * (a->basis * rng.unit_ball(k)));
    }
    return;
  }
  if (const auto* s = X.get_if<SmoothEquality>()) {
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = Rng::for_index(seed, stream, i);
      Vec p = x + eps * rng.unit_ball(dim);
      bool ok = false;
      for (int it = 0; it < 30; ++it) {
        const Vec r = constraint_residual(*s, p);
        if (r.norm() <= 1e-13 * (1.0 + p.norm())) {
          ok = true;
          break;
        }
        const Mat J = constraint_jacobian(*s, p);
        p -= Eigen::CompleteOrthogonalDecomposition<Mat>(J).solve(r);
      }
      if (ok && in_ball(p, x, eps)) out.push_back(p);
    }
    return;
  }

  Mat A;
  Vec b;
  const bool polyhedral = facets(X, A, b);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::for_index(seed, stream, i);
    const Vec p = x + eps * rng.unit_ball(dim);
    if (X.contains(p)) out.push_back(p);
    if (polyhedral) {
      // Project onto the facet plane with the smallest normalized slack.
      Eigen::Index best = 0;
      double best_slack = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < A.rows(); ++r) {
        const double slack = std::abs(b[r] - A.row(r).dot(p)) / A.row(r).norm();
        if (slack < best_slack) {
          best_slack = slack;
          best = r;
        }
      }
      const Vec a = A.row(best).transpose();
      const Vec q = p - ((a.dot(p) - b[best]) / a.squaredNorm()) * a;
      if (X.contains(q) && in_ball(q, x, eps)) out.push_back(q);
    }
  }
  if (const auto* e = X.get_if<DyadicEpigraph>()) {
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = Rng::for_index(seed, stream + 0x9000, i);
      const double t = x[0] + eps * (2.0 * rng.uniform() - 1.0);
      Vec q(2);
      q << t, dyadic::value(t, e->depth);
      if (in_ball(q, x, eps)) out.push_back(q);
    }
  }
}

}  // namespace

PointCloud sample_ball_intersection(const DomainModel& X, const Vec& x, double eps, std::size_t n,
                                    std::uint64_t seed) {
  require_dim(x, X.dimension(), "sample_ball_intersection: x");
  if (!(eps > 0.0)) throw ConfigError("sample_ball_intersection: eps must be positive");
  PointCloud c;
  c.seed = seed;
  c.budget = n;
  c.provenance = X.kind_name() + " ball sample, seed " + std::to_string(seed);
  if (X.contains(x)) c.points.push_back(x);
  sample_into(X, x, eps, n, seed, 0, c.points);
  if (c.points.empty()) {
    throw NumericalError("sample_ball_intersection: no point of the " + X.kind_name() + " domain found within eps = " +
                         std::to_string(eps) + " after " + std::to_string(n) + " samples");
  }
  return c;
}

double directed_distance(const PointCloud& C, const PointCloud& D, Exec exec) {
  if (C.points.empty() || D.points.empty()) throw ConfigError("hausdorff: empty point cloud");
  const IndexedMax m = argmax_index(exec, C.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& q : D.points) best = std::min(best, (C.points[i] - q).squaredNorm());
    return best;
  });
  return std::sqrt(m.value);
}

double hausdorff_distance(const PointCloud& C, const PointCloud& D, Exec exec) {
  return std::max(directed_distance(C, D, exec), directed_distance(D, C, exec));
}

SetmapEstimate setmap_lip_estimate(const DomainModel& X, const Vec& xbar, double eps, const SetmapConfig& cfg,
                                   Exec exec) {
  require_dim(xbar, X.dimension(), "setmap_lip_estimate: x̄");
  const Eigen::Index n = xbar.size();
  const double R = cfg.neighborhood * eps;
  SetmapEstimate est;
  est.eps = eps;
  est.min_cloud = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < cfg.pairs; ++k) {
    Rng rng = Rng::for_index(cfg.seed, 0x5e7, k);
    const Vec x = xbar + R * rng.unit_ball(n);
    const Vec xp = xbar + R * rng.unit_ball(n);
    const double dx = (x - xp).norm();
    if (dx <= 1e-12 * R) continue;
    // Same cloud seed at both centers: the clouds are translates where X allows.
    const std::uint64_t cloud_seed = cfg.seed * 1000003 + k;
    PointCloud A, B;
    try {
      A = sample_ball_intersection(X, x, eps, cfg.cloud_size, cloud_seed);
      B = sample_ball_intersection(X, xp, eps, cfg.cloud_size, cloud_seed);
    } catch (const NumericalError&) {
      continue;
    }
    est.min_cloud = std::min({est.min_cloud, A.size(), B.size()});
    est.value = std::max(est.value, hausdorff_distance(A, B, exec) / dx);
    ++est.pairs;
  }
  if (est.pairs == 0) throw NumericalError("setmap_lip_estimate: no pair produced two non-empty clouds");
  return est;
}

PeacefulProfile peaceful_profile(const DomainModel& X, const Vec& xbar, const std::vector<double>& eps_grid,
                                 const SetmapConfig& cfg, double threshold, Exec exec) {
  if (eps_grid.empty()) throw ConfigError("peaceful_profile: empty radius grid");
  PeacefulProfile p;
  p.threshold = threshold;
  for (double e : eps_grid) p.rows.push_back(setmap_lip_estimate(X, xbar, e, cfg, exec));
  std::vector<std::size_t> idx(p.rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p.rows[a].eps < p.rows[b].eps; });
  p.one_peaceful = true;
  for (std::size_t k = 0; k < std::min<std::size_t>(2, idx.size()); ++k) {
    if (p.rows[idx[k]].value > 1.0 + threshold) p.one_peaceful = false;
  }
  return p;
}

}  // namespace robreg::geom
