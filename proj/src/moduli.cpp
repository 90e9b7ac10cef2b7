#include "robreg/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robreg/regularize.hpp"
#include "robreg/rng.hpp"

namespace robreg {

namespace {

constexpr std::uint64_t kPairStream = 0x1000;

double eval_or_nan(const PointFn& F, const Vec& x) {
  try {
    return F(x);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double richardson(double d0, double d1, double d2) {
  const double r01 = 2.0 * d1 - d0;
  const double r12 = 2.0 * d2 - d1;
  return (4.0 * r12 - r01) / 3.0;
}

void finish_shells(ModulusEstimate& est, double growth_limit) {
  const auto& s = est.shells;
  if (s.empty()) return;
  if (s.size() == 1) {
    est.value = s.back().max_ratio;
    return;
  }
  const double prev = s[s.size() - 2].max_ratio, last = s.back().max_ratio;
  est.value = std::max(prev, last);
  if (last > growth_limit * prev && last > 0.0) {
    est.infinite = true;
    est.value = std::numeric_limits<double>::infinity();
    est.flags.push_back("infinite");
  }
}

}  // namespace

const char* to_string(ModulusKind k) { return k == ModulusKind::Calm ? "calm" : "lip"; }

const char* to_string(ModulusMethod m) {
  switch (m) {
    case ModulusMethod::ProfileDerivative:
      return "profile-derivative";
    case ModulusMethod::SpatialSampling:
      return "spatial-sampling";
    case ModulusMethod::LimsupOfCalm:
      return "limsup-of-calm";
  }
  return "?";
}

OneSided one_sided_derivatives(const ProfileFn& g, double eps, double rel_step) {
  if (!(eps > 0.0)) throw ConfigError("profile derivative: eps must be positive");
  if (!(rel_step > 0.0 && rel_step < 0.5)) throw ConfigError("profile derivative: relative step must be in (0, 0.5)");
  const double g0 = g(eps);
  OneSided out;
  double left[3], right[3];
  for (int k = 0; k < 3; ++k) {
    const double h = rel_step * eps / static_cast<double>(1 << k);
    left[k] = (g0 - g(eps - h)) / h;
    right[k] = (g(eps + h) - g0) / h;
  }
  for (int k = 0; k < 3; ++k) out.raw.push_back(left[k]);
  for (int k = 0; k < 3; ++k) out.raw.push_back(right[k]);
  for (double q : out.raw) {
    if (!std::isfinite(q)) throw NumericalError("profile derivative: non-finite difference quotient");
  }
  out.left = richardson(left[0], left[1], left[2]);
  out.right = richardson(right[0], right[1], right[2]);
  return out;
}

ModulusEstimate calm_from_profile(const ProfileFn& g, double eps, double rel_step) {
  const OneSided d = one_sided_derivatives(g, eps, rel_step);
  ModulusEstimate est;
  est.kind = ModulusKind::Calm;
  est.method = ModulusMethod::ProfileDerivative;
  est.value = std::max(std::abs(d.left), std::abs(d.right));
  est.left = d.left;
  est.right = d.right;
  est.raw_quotients = d.raw;
  est.samples = 7;
  return est;
}

SubgradientInterval subgradient_interval(const ProfileFn& g, double eps, double rel_step) {
  const OneSided d = one_sided_derivatives(g, eps, rel_step);
  return {std::min(d.left, d.right), std::max(d.left, d.right)};
}

ModulusEstimate calm_direct(const PointFn& F, const DomainModel& X, const Vec& xbar, const SamplingConfig& cfg,
                            Exec exec) {
  require_dim(xbar, X.dimension(), "calm_direct: x̄");
  if (!X.contains(xbar)) throw DomainError("calm_direct: x̄ is not in the domain");
  const double f0 = F(xbar);
  const Eigen::Index n = xbar.size();
  ModulusEstimate est;
  est.kind = ModulusKind::Calm;
  est.method = ModulusMethod::SpatialSampling;
  for (std::size_t s = 0; s < cfg.radii.size(); ++s) {
    const double r = cfg.radii[s];
    std::vector<char> used(cfg.samples_per_radius, 0);
    const IndexedMax best = argmax_index(exec, cfg.samples_per_radius, [&](std::size_t j) {
      Rng rng = Rng::for_index(cfg.seed, s, j);
      const Vec u = rng.unit_direction(n);
      const Vec x = xbar + r * (0.5 + 0.5 * rng.uniform()) * u;
      if (!X.contains(x)) return std::numeric_limits<double>::quiet_NaN();
      const double v = eval_or_nan(F, x);
      if (std::isnan(v)) return v;
      used[j] = 1;
      return std::abs(v - f0) / (x - xbar).norm();
    });
    Shell sh{r, best.found() ? best.value : 0.0, static_cast<std::size_t>(std::count(used.begin(), used.end(), 1))};
    est.samples += sh.samples;
    est.shells.push_back(sh);
  }
  finish_shells(est, cfg.infinite_growth);
  return est;
}

ModulusEstimate lip_direct(const PointFn& F, const DomainModel& X, const Vec& xbar, const SamplingConfig& cfg,
                           Exec exec) {
  require_dim(xbar, X.dimension(), "lip_direct: x̄");
  if (!X.contains(xbar)) throw DomainError("lip_direct: x̄ is not in the domain");
  const Eigen::Index n = xbar.size();
  ModulusEstimate est;
  est.kind = ModulusKind::Lip;
  est.method = ModulusMethod::SpatialSampling;
  for (std::size_t s = 0; s < cfg.radii.size(); ++s) {
    const double r = cfg.radii[s];
    std::vector<char> used(cfg.samples_per_radius, 0);
    const IndexedMax best = argmax_index(exec, cfg.samples_per_radius, [&](std::size_t j) {
      Rng rng = Rng::for_index(cfg.seed, kPairStream + s, j);
      const Vec x = xbar + r * rng.unit_ball(n);
      const double rho = r * std::pow(10.0, -cfg.pair_decades * rng.uniform());
      const Vec xp = x + rho * rng.unit_direction(n);
      if (!X.contains(x) || !X.contains(xp)) return std::numeric_limits<double>::quiet_NaN();
      const double a = eval_or_nan(F, x), b = eval_or_nan(F, xp);
      if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
      used[j] = 1;
      return std::abs(a - b) / (x - xp).norm();
    });
    Shell sh{r, best.found() ? best.value : 0.0, static_cast<std::size_t>(std::count(used.begin(), used.end(), 1))};
    est.samples += sh.samples;
    est.shells.push_back(sh);
  }
  finish_shells(est, cfg.infinite_growth);
  return est;
}

ModulusEstimate lip_via_calm_limsup(const PointFn& F, const DomainModel& X, const Vec& xbar, const LimsupConfig& cfg,
                                    Exec exec) {
  require_dim(xbar, X.dimension(), "lip_via_calm_limsup: x̄");
  const Eigen::Index n = xbar.size();
  ModulusEstimate est;
  est.kind = ModulusKind::Lip;
  est.method = ModulusMethod::LimsupOfCalm;
  if (!X.is_convex()) est.flags.push_back("nonconvex_domain");
  for (std::size_t s = 0; s < cfg.neighborhoods.size(); ++s) {
    const double R = cfg.neighborhoods[s];
    SamplingConfig inner = cfg.inner;
    for (double& r : inner.radii) r *= R;
    Shell sh{R, 0.0, 0};
    // Centers run in order; the inner shells parallelize.
    for (std::size_t c = 0; c < cfg.centers; ++c) {
      Rng rng = Rng::for_index(cfg.inner.seed, 0x2000 + s, c);
      const Vec x = c == 0 ? xbar : Vec(xbar + R * rng.unit_ball(n));
      if (!X.contains(x)) continue;
      inner.seed = cfg.inner.seed + 7919 * (c + 1);
      const ModulusEstimate m = calm_direct(F, X, x, inner, exec);
      sh.samples += m.samples;
      if (!m.infinite) sh.max_ratio = std::max(sh.max_ratio, m.value);
    }
    est.samples += sh.samples;
    est.shells.push_back(sh);
  }
  finish_shells(est, cfg.inner.infinite_growth);
  return est;
}

OOneOverEpsReport o_one_over_eps_report(const ProfileFn& g, std::vector<double> eps_grid, double factor) {
  if (eps_grid.size() < 2) throw ConfigError("o(1/eps) report: need at least two radii");
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
  OOneOverEpsReport rep;
  for (double e : eps_grid) {
    const double calm = calm_from_profile(g, e).value;
    rep.rows.push_back({e, calm, e * calm});
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (!(rep.rows[i].eps_calm < rep.rows[i - 1].eps_calm)) rep.monotone = false;
  }
  const double last = rep.rows.back().eps_calm;
  rep.decrease = last > 0.0 ? rep.rows.front().eps_calm / last : std::numeric_limits<double>::infinity();
  rep.pass = rep.monotone && rep.decrease >= factor;
  return rep;
}

AgreementReport calm_lip_agreement_report(const RobustEvaluator& ev, const std::function<Vec(double)>& base_point,
                                          const std::vector<double>& eps_grid, const AgreementConfig& cfg,
                                          Exec exec) {
  if (eps_grid.empty()) throw ConfigError("agreement report: empty radius grid");
  AgreementReport rep;
  for (double e : eps_grid) {
    const Vec x = base_point(e);
    AgreementRow row;
    row.eps = e;
    row.calm_est = calm_from_profile(ev.profile(x), e).value;
    SamplingConfig sc;
    sc.radii.clear();
    for (double r : cfg.relative_radii) sc.radii.push_back(r * e);
    sc.samples_per_radius = cfg.pairs_per_radius;
    sc.seed = cfg.seed;
    sc.pair_decades = cfg.pair_decades;
    const ModulusEstimate lip = lip_direct(ev.at(e), ev.domain(), x, sc, exec);
    row.lip_est = lip.value;
    row.flags = lip.flags;
    const double scale = std::max(row.calm_est, row.lip_est);
    row.gap_rel = scale > 0.0 ? std::abs(row.calm_est - row.lip_est) / scale : 0.0;
    // Sampled lip is a lower bound, so small shortfalls are expected.
    if (row.lip_est < (1.0 - cfg.tolerance) * row.calm_est) row.flags.push_back("lip_below_calm");
    rep.rows.push_back(row);
  }
  // The two smallest radii decide.
  std::vector<std::size_t> idx(rep.rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rep.rows[a].eps < rep.rows[b].eps; });
  rep.pass = true;
  for (std::size_t k = 0; k < std::min<std::size_t>(2, idx.size()); ++k) {
    const AgreementRow& r = rep.rows[idx[k]];
    if (!(r.gap_rel <= cfg.tolerance) || !std::isfinite(r.lip_est)) rep.pass = false;
  }
  return rep;
}

AgreementReport calm_lip_agreement_report(const RobustEvaluator& ev, const Vec& xbar,
                                          const std::vector<double>& eps_grid, const AgreementConfig& cfg,
                                          Exec exec) {
  return calm_lip_agreement_report(ev, [xbar](double) { return xbar; }, eps_grid, cfg, exec);
}

}  // namespace robreg
