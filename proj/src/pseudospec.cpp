#include "robreg/pseudospec.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace robreg::pseudo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_square(const CMat& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DimensionError("pseudospectrum: matrix must be square and non-empty");
}

// Bisection for the sigma_min = eps crossing between an inside point (t_in)
// and an outside point (t_out) along a one-parameter path.
template <class Path>
double bisect_boundary(const CMat& A, double eps, double t_in, double t_out, double tol, Path&& path,
                       std::size_t& evals) {
  for (int it = 0; it < 200; ++it) {
    if (std::abs(t_out - t_in) <= tol) break;
    const double mid = 0.5 * (t_in + t_out);
    if (mid == t_in || mid == t_out) break;
    ++evals;
    if (sigma_min_resolvent(A, path(mid)) <= eps) {
      t_in = mid;
    } else {
      t_out = mid;
    }
  }
  return t_in;
}

// Along path(t), starting from an inside t_in, walk outward by `step` until
// leaving the sublevel set, then bisect. Returns -inf if t_in is not inside.
template <class Path>
double outward_boundary(const CMat& A, double eps, double t_in, double step, int max_steps, double tol, Path&& path,
                        std::size_t& evals) {
  ++evals;
  if (sigma_min_resolvent(A, path(t_in)) > eps) return kNegInf;
  double t_out = t_in + step;
  for (int k = 0; k < max_steps; ++k) {
    ++evals;
    if (sigma_min_resolvent(A, path(t_out)) > eps) break;
    t_in = t_out;
    t_out += step;
  }
  return bisect_boundary(A, eps, t_in, t_out, tol, path, evals);
}

template <class F>
double golden_max(F&& f, double a, double b, int iterations, double* arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && b - a > 0.0; ++it) {
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
  *arg = fc >= fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace

std::vector<Complex> eigenvalues(const CMat& A) {
  require_square(A);
  Eigen::ComplexEigenSolver<CMat> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const auto& ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

double spectral_abscissa(const CMat& A) {
  double best = kNegInf;
  for (const Complex& l : eigenvalues(A)) best = std::max(best, l.real());
  return best;
}

double spectral_radius(const CMat& A) {
  double best = 0.0;
  for (const Complex& l : eigenvalues(A)) best = std::max(best, std::abs(l));
  return best;
}

double sigma_min_resolvent(const CMat& A, Complex z) {
  require_square(A);
  CMat M = -A;
  M.diagonal().array() += z;
  if (M.rows() == 1) return std::abs(M(0, 0));
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues().minCoeff();
}

Result pseudospectral_abscissa(const CMat& A, double eps, const GridConfig& grid, Exec exec) {
  require_square(A);
  if (eps < 0.0 || !std::isfinite(eps)) throw ConfigError("pseudospectral abscissa: eps must be >= 0");
  if (grid.resolution < 32) throw ConfigError("pseudospectral abscissa: resolution must be >= 32");
  const std::vector<Complex> lambda = eigenvalues(A);
  Result out;
  if (eps == 0.0) {
    const auto it = std::max_element(lambda.begin(), lambda.end(),
                                     [](Complex a, Complex b) { return a.real() < b.real(); });
    out.value = it->real();
    out.arg = *it;
    return out;
  }

  double re_lo = -kNegInf, re_hi = kNegInf, im_lo = -kNegInf, im_hi = kNegInf;
  for (const Complex& l : lambda) {
    re_lo = std::min(re_lo, l.real());
    re_hi = std::max(re_hi, l.real());
    im_lo = std::min(im_lo, l.imag());
    im_hi = std::max(im_hi, l.imag());
  }
  double cx = 0.5 * (re_lo + re_hi), cy = 0.5 * (im_lo + im_hi);
  double hx = 0.5 * (re_hi - re_lo) + 2.0 * eps, hy = 0.5 * (im_hi - im_lo) + 2.0 * eps;

  const int R = grid.resolution;
  std::size_t evals = 0;
  // Grow the window until its boundary is outside the sublevel set.
  for (int expansion = 0;; ++expansion) {
    const double x0 = cx - hx, y0 = cy - hy;
    const double dx = 2.0 * hx / (R - 1), dy = 2.0 * hy / (R - 1);
    const std::vector<double> edge = map_indices(exec, 4 * static_cast<std::size_t>(R), [&](std::size_t idx) {
      const auto side = static_cast<int>(idx / R), k = static_cast<int>(idx % R);
      const Complex z = side == 0   ? Complex(x0 + k * dx, y0)
                        : side == 1 ? Complex(x0 + k * dx, y0 + (R - 1) * dy)
                        : side == 2 ? Complex(x0, y0 + k * dy)
                                    : Complex(x0 + (R - 1) * dx, y0 + k * dy);
      return sigma_min_resolvent(A, z);
    });
    evals += edge.size();
    if (std::none_of(edge.begin(), edge.end(), [&](double v) { return v <= eps; })) {
      out.window_expansions = expansion;
      break;
    }
    if (expansion >= grid.max_window_expansions) {
      throw NumericalError("pseudospectral abscissa: sublevel set still touches the grid window after " +
                           std::to_string(expansion) + " expansions");
    }
    hx *= 2.0;
    hy *= 2.0;
  }
  {
    const double x0 = cx - hx, y0 = cy - hy;
    const double dx = 2.0 * hx / (R - 1), dy = 2.0 * hy / (R - 1);
    const std::vector<double> sig = map_indices(exec, static_cast<std::size_t>(R) * R, [&](std::size_t idx) {
      const auto i = static_cast<int>(idx / R), j = static_cast<int>(idx % R);
      return sigma_min_resolvent(A, Complex(x0 + j * dx, y0 + i * dy));
    });
    evals += sig.size();

    // Rows: every grid row plus one through each eigenvalue.
    struct Row {
      double y;
      double x_inside;
    };
    std::vector<Row> rows;
    for (int i = 0; i < R; ++i) {
      double right = kNegInf;
      for (int j = R - 1; j >= 0; --j) {
        if (sig[static_cast<std::size_t>(i) * R + j] <= eps) {
          right = x0 + j * dx;
          break;
        }
      }
      if (right > kNegInf) rows.push_back({y0 + i * dy, right});
    }
    for (const Complex& l : lambda) rows.push_back({l.imag(), l.real()});

    std::vector<std::size_t> row_evals(rows.size(), 0);
    const double tol = std::max(grid.refine_tol, 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(cx) + hx));
    const std::vector<double> boundary = map_indices(exec, rows.size(), [&](std::size_t r) {
      const double y = rows[r].y;
      return outward_boundary(A, eps, rows[r].x_inside, dx, 4 * R, tol,
                              [y](double t) { return Complex(t, y); }, row_evals[r]);
    });
    for (std::size_t e : row_evals) evals += e;

    std::size_t best = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (boundary[r] > boundary[best]) best = r;
    }
    double best_x = boundary[best];
    double best_y = rows[best].y;

    // Refine over the row coordinate around the best row.
    const double anchor = best_x;
    auto right_edge = [&](double y) {
      for (int back = 0; back <= 8; ++back) {
        const double start = anchor - back * dx;
        const double b = outward_boundary(A, eps, start, dx, 4 * R, tol, [y](double t) { return Complex(t, y); }, evals);
        if (b > kNegInf) return b;
      }
      return kNegInf;
    };
    double y_arg = best_y;
    const double refined = golden_max(right_edge, best_y - dy, best_y + dy, 80, &y_arg);
    if (refined > best_x) {
      best_x = refined;
      best_y = y_arg;
    }
    out.value = best_x;
    out.arg = Complex(best_x, best_y);
    out.evaluations = evals;
    return out;
  }
}

Result pseudospectral_radius(const CMat& A, double eps, const GridConfig& grid, Exec exec) {
  require_square(A);
  if (eps < 0.0 || !std::isfinite(eps)) throw ConfigError("pseudospectral radius: eps must be >= 0");
  if (grid.resolution < 32) throw ConfigError("pseudospectral radius: resolution must be >= 32");
  const std::vector<Complex> lambda = eigenvalues(A);
  Result out;
  if (eps == 0.0) {
    const auto it = std::max_element(lambda.begin(), lambda.end(),
                                     [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    out.value = std::abs(*it);
    out.arg = *it;
    return out;
  }

  double rmax = 0.0;
  for (const Complex& l : lambda) rmax = std::max(rmax, std::abs(l));
  rmax += 2.0 * eps;

  const int R = grid.resolution;
  std::size_t evals = 0;
  const double dtheta = 2.0 * std::numbers::pi / R;
  for (int expansion = 0;; ++expansion) {
    const std::vector<double> edge = map_indices(exec, static_cast<std::size_t>(R), [&](std::size_t i) {
      return sigma_min_resolvent(A, std::polar(rmax, static_cast<double>(i) * dtheta));
    });
    evals += edge.size();
    if (std::none_of(edge.begin(), edge.end(), [&](double v) { return v <= eps; })) {
      out.window_expansions = expansion;
      break;
    }
    if (expansion >= grid.max_window_expansions) {
      throw NumericalError("pseudospectral radius: sublevel set still touches the grid window after " +
                           std::to_string(expansion) + " expansions");
    }
    rmax *= 2.0;
  }
  {
    const double dr = rmax / (R - 1);
    auto ray = [](double theta) { return [theta](double r) { return std::polar(r, theta); }; };
    const std::vector<double> sig = map_indices(exec, static_cast<std::size_t>(R) * R, [&](std::size_t idx) {
      const auto i = static_cast<int>(idx / R), j = static_cast<int>(idx % R);
      return sigma_min_resolvent(A, std::polar(j * dr, i * dtheta));
    });
    evals += sig.size();

    struct Ray {
      double theta;
      double r_inside;
    };
    std::vector<Ray> rays;
    for (int i = 0; i < R; ++i) {
      for (int j = R - 1; j >= 0; --j) {
        if (sig[static_cast<std::size_t>(i) * R + j] <= eps) {
          rays.push_back({i * dtheta, j * dr});
          break;
        }
      }
    }
    for (const Complex& l : lambda) rays.push_back({std::arg(l), std::abs(l)});

    const double tol = std::max(grid.refine_tol, 4.0 * std::numeric_limits<double>::epsilon() * rmax);
    std::vector<std::size_t> ray_evals(rays.size(), 0);
    const std::vector<double> boundary = map_indices(exec, rays.size(), [&](std::size_t k) {
      return outward_boundary(A, eps, rays[k].r_inside, dr, 4 * R, tol, ray(rays[k].theta), ray_evals[k]);
    });
    for (std::size_t e : ray_evals) evals += e;

    std::size_t best = 0;
    for (std::size_t k = 1; k < rays.size(); ++k) {
      if (boundary[k] > boundary[best]) best = k;
    }
    double best_r = boundary[best];
    double best_theta = rays[best].theta;
    const double anchor = best_r;
    auto outer_edge = [&](double theta) {
      for (int back = 0; back <= 8; ++back) {
        const double start = std::max(0.0, anchor - back * dr);
        const double b = outward_boundary(A, eps, start, dr, 4 * R, tol, ray(theta), evals);
        if (b > kNegInf) return b;
      }
      return kNegInf;
    };
    double theta_arg = best_theta;
    const double refined = golden_max(outer_edge, best_theta - dtheta, best_theta + dtheta, 80, &theta_arg);
    if (refined > best_r) {
      best_r = refined;
      best_theta = theta_arg;
    }
    out.value = best_r;
    out.arg = std::polar(best_r, best_theta);
    out.evaluations = evals;
    return out;
  }
}

Result compute(const Query& q, Exec exec) {
  return q.quantity == Quantity::Abscissa ? pseudospectral_abscissa(q.A, q.eps, q.grid, exec)
                                          : pseudospectral_radius(q.A, q.eps, q.grid, exec);
}

RobustProfile spectral_epsilon_profile(const CMat& A, const RadiusSpec& grid, Quantity quantity,
                                       const GridConfig& cfg, Exec exec) {
  RobustProfile p;
  p.x = Vec(0);
  p.eps = grid.values();
  p.base_value = quantity == Quantity::Abscissa ? spectral_abscissa(A) : spectral_radius(A);
  p.values.reserve(grid.size());
  for (double e : grid.values()) p.values.push_back(compute(Query{A, e, quantity, cfg}, exec).value);
  p.methods.assign(grid.size(), ValueMethod::Oracle);
  for (std::size_t i = 1; i < p.values.size(); ++i) {
    if (p.values[i] < p.values[i - 1] - 1e-10 * (1.0 + std::abs(p.values[i - 1]))) {
      p.monotonicity_violations.push_back(i);
    }
  }
  return p;
}

}  // namespace robreg::pseudo
