#include "robreg/regularize.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robreg/pseudospec.hpp"
#include "robreg/rng.hpp"

namespace robreg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSearchStream = 0x5EA2C4;

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("radius must be positive and finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// RadiusSpec

RadiusSpec::RadiusSpec(std::vector<double> radii) : radii_(std::move(radii)) {
  if (radii_.empty()) throw ConfigError("radius grid is empty");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i])) throw ConfigError("radius grid entries must be positive");
    if (i > 0 && !(radii_[i] > radii_[i - 1])) throw ConfigError("radius grid must be strictly increasing");
  }
}

RadiusSpec RadiusSpec::log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("invalid log-spaced radius grid");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    r[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, t);
  }
  r.front() = lo;
  r.back() = hi;
  return RadiusSpec(std::move(r));
}

// ---------------------------------------------------------------------------
// Ball-constrained convex quadratic maximization

BallQuadraticMax maximize_quadratic_on_ball(const Mat& H, const Vec& c, double d, const Vec& x, double eps) {
  require_positive_eps(eps);
  const Eigen::Index n = H.rows();
  if (H.cols() != n) throw DimensionError("quadratic: H must be square");
  require_dim(c, n, "quadratic: c");
  require_dim(x, n, "quadratic: x");

  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("quadratic: eigensolver failed");
  const Vec& lambda = es.eigenvalues();  // ascending
  const Mat& Q = es.eigenvectors();
  const double lmax = lambda[n - 1];
  const double scale = std::max(1.0, std::abs(lmax));

  const Vec g = H * x + c;
  const Vec gamma = Q.transpose() * g;
  const double gnorm = g.norm();
  const double base = x.dot(H * x) + 2.0 * c.dot(x) + d;

  // Eigenvalues within this band of lambda_max count as the top eigenspace.
  const double top_band = 1e-12 * scale;
  const double gamma_tol = 1e-13 * (1.0 + gnorm);

  BallQuadraticMax out;
  Vec e(n);

  bool top_orthogonal = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] >= lmax - top_band && std::abs(gamma[i]) > gamma_tol) top_orthogonal = false;
  }

  bool solved = false;
  if (top_orthogonal) {
    // Candidate hard case: nu = lambda_max if the rest of the step is short enough.
    Vec partial = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lambda[i] < lmax - top_band) partial += (gamma[i] / (lmax - lambda[i])) * Q.col(i);
    }
    const double pn = partial.norm();
    if (pn <= eps) {
      const double tau = std::sqrt(std::max(0.0, eps * eps - pn * pn));
      e = partial + tau * Q.col(n - 1);
      out.multiplier = lmax;
      out.hard_case = true;
      solved = true;
    }
  }

  if (!solved) {
    // ||e(nu)|| is decreasing on (lambda_max, inf); at nu = lambda_max + ||g||/eps it is <= eps.
    auto step_norm2 = [&](double nu) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = gamma[i] / (nu - lambda[i]);
        s += t * t;
      }
      return s;
    };
    double lo = lmax;
    double hi = lmax + gnorm / eps;
    const double target = eps * eps;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double r = step_norm2(mid) - target;
      if (std::abs(r) <= 1e-12 * target) {
        lo = hi = mid;
        break;
      }
      if (r > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double nu = hi;
    e.setZero();
    for (Eigen::Index i = 0; i < n; ++i) e += (gamma[i] / (nu - lambda[i])) * Q.col(i);
    out.multiplier = nu;
  }

  const double en = e.norm();
  if (en > 0.0) e *= eps / en;  // land exactly on the sphere
  out.argmax = x + e;
  out.value = base + e.dot(H * e) + 2.0 * g.dot(e);
  return out;
}

double robust_value_quadratic(const Mat& H, const Vec& c, double d, const Vec& x, double eps) {
  if (H.rows() != H.cols()) throw DimensionError("quadratic: H must be square");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff())) {
    throw DomainError("quadratic: H is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("quadratic: eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 1e-10) throw DomainError("quadratic: H is not positive definite");
  return maximize_quadratic_on_ball(H, c, d, x, eps).value;
}

double robust_value_affine_norm(const Mat& A, const Vec& b, const Vec& x, double eps) {
  require_dim(b, A.rows(), "affine_norm: b");
  require_dim(x, A.cols(), "affine_norm: x");
  const Mat H = A.transpose() * A;
  const Vec c = A.transpose() * b;
  const double best = maximize_quadratic_on_ball(H, c, b.squaredNorm(), x, eps).value;
  return std::sqrt(std::max(0.0, best));
}

// ---------------------------------------------------------------------------
// 1-D piecewise oracle

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b, double tol, double* arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
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
  if (fc >= fd) {
    if (arg) *arg = c;
    return fc;
  }
  if (arg) *arg = d;
  return fd;
}

std::pair<double, double> interval_domain(const DomainModel& X) {
  if (X.dimension() != 1) throw DimensionError("piecewise1d oracle: domain must be one-dimensional");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (X.get_if<FullSpace>()) return {-inf, inf};
  if (const auto* b = X.get_if<Box>()) return {b->lower[0], b->upper[0]};
  if (const auto* b = X.get_if<Ball>()) return {b->center[0] - b->radius, b->center[0] + b->radius};
  throw ConfigError("piecewise1d oracle: domain must be an interval (full space, box or ball)");
}

}  // namespace

double robust_value_piecewise1d(const Piecewise1DFn& f, const DomainModel& X, double x, double eps,
                                const IntervalConfig& cfg) {
  require_positive_eps(eps);
  const auto [dlo, dhi] = interval_domain(X);
  const double lo = std::max(x - eps, dlo);
  const double hi = std::min(x + eps, dhi);
  if (lo > hi) throw DomainError("piecewise1d oracle: [x - eps, x + eps] misses the domain");

  double best = kNegInf;
  // Segment boundaries: clipped endpoints plus interior breakpoints.
  std::vector<double> cuts{lo};
  for (double b : f.breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);

  const int scan = std::max(cfg.scan_points, 2);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    // The piece owning the open segment (a, b).
    const std::size_t idx = f.piece_index(a == b ? a : 0.5 * (a + b));
    const auto& piece = f.pieces[idx];
    best = std::max({best, piece(a), piece(b)});
    if (b > a) {
      const double h = (b - a) / scan;
      int arg = 0;
      double grid_best = kNegInf;
      for (int i = 0; i <= scan; ++i) {
        const double t = i == scan ? b : a + i * h;
        const double v = piece(t);
        if (v > grid_best) {
          grid_best = v;
          arg = i;
        }
      }
      best = std::max(best, grid_best);
      if (arg > 0 && arg < scan) {
        const double l = a + (arg - 1) * h;
        const double r = a + (arg + 1) * h;
        best = std::max(best, golden_max(piece.f, l, r, cfg.refine_tol * (1.0 + std::abs(x)), nullptr));
      }
    }
  }
  // Actual values at the clipped ends (a breakpoint at hi belongs to the piece on its right).
  best = std::max({best, f.pieces[f.piece_index(lo)](lo), f.pieces[f.piece_index(hi)](hi)});
  return best;
}

// ---------------------------------------------------------------------------
// Multistart search

namespace {

struct Feasible {
  const PointFn& f;
  const DomainModel& X;
  const Vec& center;
  double eps;

  double operator()(const Vec& y) const {
    if ((y - center).norm() > eps * (1.0 + 1e-12)) return kNegInf;
    if (!X.contains(y)) return kNegInf;
    return raw(y);
  }

  /// f without the feasibility test; NaN and domain errors map to -inf.
  double raw(const Vec& y) const {
    try {
      const double v = f(y);
      return std::isnan(v) ? kNegInf : v;
    } catch (const DomainError&) {
      return kNegInf;
    }
  }
};

Vec project_to_ball(const Vec& y, const Vec& center, double eps) {
  const Vec e = y - center;
  const double n = e.norm();
  if (n <= eps) return y;
  return center + e * (eps / n);
}

Vec project_to_feasible(const Vec& y, const DomainModel& X, const Vec& center, double eps) {
  Vec p = project_to_ball(y, center, eps);
  if (const auto* box = X.get_if<Box>()) {
    for (int k = 0; k < 4; ++k) {
      p = p.cwiseMax(box->lower).cwiseMin(box->upper);
      p = project_to_ball(p, center, eps);
    }
  }
  return p;
}

double refine(const Feasible& F, Vec& y, double value, const SearchConfig& cfg) {
  const Eigen::Index n = y.size();
  const Vec& x = F.center;
  const double eps = F.eps;

  // Coordinate line maximization along the feasible chord.
  for (int sweep = 0; sweep < cfg.coordinate_sweeps; ++sweep) {
    const double before = value;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec e = y - x;
      const double others = e.squaredNorm() - e[i] * e[i];
      const double w = std::sqrt(std::max(0.0, eps * eps - others));
      if (w <= 0.0) continue;
      auto along = [&](double t) {
        Vec z = y;
        z[i] = x[i] + t;
        return F(z);
      };
      constexpr int kScan = 8;
      double best_t = e[i];
      double best_v = value;
      int best_k = -1;
      for (int k = 0; k <= kScan; ++k) {
        const double t = -w + 2.0 * w * k / kScan;
        const double v = along(t);
        if (v > best_v) {
          best_v = v;
          best_t = t;
          best_k = k;
        }
      }
      const double center_t = best_k >= 0 ? best_t : e[i];
      const double h = 2.0 * w / kScan;
      double arg = center_t;
      const double g = golden_max(along, std::max(-w, center_t - h), std::min(w, center_t + h), 1e-13 * (eps + 1e-300), &arg);
      if (g > best_v) {
        best_v = g;
        best_t = arg;
      }
      if (best_v > value) {
        y[i] = x[i] + best_t;
        value = best_v;
      }
    }
    if (!(value > before + 1e-15 * (1.0 + std::abs(before)))) break;
  }

  // Projected gradient polish with central differences.
  const double h = 1e-7 * eps;
  double step = eps;
  for (int it = 0; it < cfg.polish_iterations && step > 1e-14 * eps; ++it) {
    Vec grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vec yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fp = F.raw(yp);
      const double fm = F.raw(ym);
      grad[i] = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * h) : 0.0;
    }
    const double gn = grad.norm();
    if (!(gn > 0.0) || !std::isfinite(gn)) break;
    bool improved = false;
    double t = step;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Vec cand = project_to_feasible(y + (t / gn) * grad, F.X, x, eps);
      const double v = F(cand);
      if (v > value) {
        y = cand;
        value = v;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    step = std::min(eps, 2.0 * t);
  }
  return value;
}

}  // namespace

SearchResult robust_value_search(const PointFn& f, const DomainModel& X, const Vec& x, double eps,
                                 const SearchConfig& cfg, Exec exec) {
  require_positive_eps(eps);
  require_dim(x, X.dimension(), "search: x");
  const Eigen::Index n = x.size();
  const Feasible F{f, X, x, eps};
  const std::size_t N = std::max<std::size_t>(cfg.samples, 1);

  auto sample = [&](std::size_t i) -> Vec {
    if (i == 0) return x;
    Rng rng = Rng::for_index(cfg.seed, kSearchStream, i);
    return x + eps * rng.unit_ball(n);
  };

  const std::vector<double> values = map_indices(exec, N, [&](std::size_t i) { return F(sample(i)); });

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t feasible = 0;
  for (double v : values) feasible += v > kNegInf ? 1 : 0;
  if (feasible == 0) {
    throw NumericalError("search: no feasible sample in B_eps(x) intersected with the " + X.kind_name() +
                         " domain (eps = " + std::to_string(eps) + ", samples = " + std::to_string(N) + ")");
  }
  const std::size_t K = std::min(cfg.refine_starts, feasible);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(K), order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });

  std::vector<Vec> refined(K);
  const std::vector<double> refined_values = map_indices(exec, K, [&](std::size_t k) {
    Vec y = sample(order[k]);
    const double v = refine(F, y, values[order[k]], cfg);
    refined[k] = y;
    return v;
  });

  SearchResult out;
  out.feasible_samples = feasible;
  out.value = values[order[0]];
  out.argmax = sample(order[0]);
  for (std::size_t k = 0; k < K; ++k) {
    if (refined_values[k] > out.value) {
      out.value = refined_values[k];
      out.argmax = refined[k];
    }
  }
  return out;
}

SearchResult robust_value_search(const FunctionModel& f, const DomainModel& X, const Vec& x, double eps,
                                 const SearchConfig& cfg, Exec exec) {
  if (f.dimension() != X.dimension()) throw DimensionError("search: model and domain dimensions differ");
  return robust_value_search(f.as_point_fn(), X, x, eps, cfg, exec);
}

// ---------------------------------------------------------------------------
// Method selection

RobustEvaluator::RobustEvaluator(FunctionModel model, DomainModel domain, SearchConfig cfg, Exec exec)
    : model_(std::move(model)), domain_(std::move(domain)), cfg_(cfg), exec_(exec) {
  if (model_.dimension() != domain_.dimension()) throw DimensionError("model and domain dimensions differ");
}

ValueMethod RobustEvaluator::method(const Vec& x, double eps) const {
  if (model_.get_if<QuadraticFn>() || model_.get_if<AffineNormFn>()) {
    return domain_.contains_ball(x, eps) ? ValueMethod::Oracle : ValueMethod::Search;
  }
  if (model_.get_if<Piecewise1DFn>()) {
    const bool interval =
        domain_.get_if<FullSpace>() || domain_.get_if<Box>() || domain_.get_if<Ball>();
    return interval ? ValueMethod::Oracle : ValueMethod::Search;
  }
  if (model_.get_if<SpectralAbscissaFn>() || model_.get_if<SpectralRadiusFn>()) {
    return domain_.get_if<FullSpace>() ? ValueMethod::Oracle : ValueMethod::Search;
  }
  return ValueMethod::Search;
}

double RobustEvaluator::value(const Vec& x, double eps) const {
  if (eps == 0.0) return model_.eval(x);
  if (method(x, eps) == ValueMethod::Search) return robust_value_search(model_, domain_, x, eps, cfg_, exec_).value;
  if (const auto* q = model_.get_if<QuadraticFn>()) return maximize_quadratic_on_ball(q->H, q->c, q->d, x, eps).value;
  if (const auto* a = model_.get_if<AffineNormFn>()) return robust_value_affine_norm(a->A, a->b, x, eps);
  if (const auto* p = model_.get_if<Piecewise1DFn>()) return robust_value_piecewise1d(*p, domain_, x[0], eps);
  if (const auto* s = model_.get_if<SpectralAbscissaFn>()) {
    return pseudo::pseudospectral_abscissa(unflatten_row_major(x, s->n).cast<pseudo::Complex>(), eps, {}, exec_).value;
  }
  if (const auto* s = model_.get_if<SpectralRadiusFn>()) {
    return pseudo::pseudospectral_radius(unflatten_row_major(x, s->n).cast<pseudo::Complex>(), eps, {}, exec_).value;
  }
  throw Error("unreachable: no oracle for " + model_.kind_name());
}

PointFn RobustEvaluator::at(double eps) const {
  return [self = *this, eps](const Vec& x) { return self.value(x, eps); };
}

ProfileFn RobustEvaluator::profile(const Vec& x) const {
  return [self = *this, x](double eps) { return self.value(x, eps); };
}

RobustProfile epsilon_profile(const FunctionModel& model, const DomainModel& X, const Vec& x, const RadiusSpec& grid,
                              const SearchConfig& cfg, Exec exec) {
  const RobustEvaluator ev(model, X, cfg, exec);
  RobustProfile p;
  p.x = x;
  p.eps = grid.values();
  p.base_value = model.eval(x);
  p.methods.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.methods[i] = ev.method(x, grid[i]);
  // Inner kernels parallelize; grid points run in order.
  p.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] = ev.value(x, grid[i]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool oracle = p.methods[i] == ValueMethod::Oracle && p.methods[i - 1] == ValueMethod::Oracle;
    const double rel = oracle ? 1e-12 : 2.0 * cfg.tolerance;
    const double tol = rel * (1.0 + std::abs(p.values[i - 1]));
    if (p.values[i] < p.values[i - 1] - tol) p.monotonicity_violations.push_back(i);
  }
  return p;
}

}  // namespace robreg
