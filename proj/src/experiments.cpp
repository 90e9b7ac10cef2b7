#include "robreg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "robreg/cones.hpp"
#include "robreg/fixtures.hpp"
#include "robreg/geometry.hpp"
#include "robreg/lmi.hpp"
#include "robreg/moduli.hpp"
#include "robreg/pseudospec.hpp"
#include "robreg/regularize.hpp"
#include "robreg/rng.hpp"
#include "robreg/setmap.hpp"

namespace robreg {

namespace {

using report::num;

std::string yes(bool b) { return b ? "1" : "0"; }

double rel_err(double est, double ref) { return std::abs(est - ref) / std::max(std::abs(ref), 1e-300); }

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
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
  return fc <= fd ? c : d;
}

// One-sided slopes of a scalar function at t with absolute steps h0, h0/2, h0/4.
std::pair<double, double> one_sided(const std::function<double(double)>& F, double t, double h0) {
  const double f0 = F(t);
  double L[3], R[3];
  for (int k = 0; k < 3; ++k) {
    const double h = h0 / (1 << k);
    L[k] = (f0 - F(t - h)) / h;
    R[k] = (F(t + h) - f0) / h;
  }
  auto rich = [](const double* d) { return (4.0 * (2.0 * d[2] - d[1]) - (2.0 * d[1] - d[0])) / 3.0; };
  return {rich(L), rich(R)};
}

ExperimentResult intro1d_minimizer(const ReproduceOptions& opt) {
  const double eps = opt.eps.value_or(0.25);
  if (!(eps > 0.0)) throw ConfigError("intro1d-minimizer: --eps must be positive");
  const Fixture fx = load_fixture("intro1d");
  const RobustEvaluator ev(*fx.model, fx.domain, {}, opt.exec);
  auto F = [&](double t) { return ev.value(Vec::Constant(1, t), eps); };
  const double alpha = golden_min(F, -1.0 - eps, 1.0, 1e-13);
  const double expected = intro_alpha(eps);
  const auto [left, right] = one_sided(F, alpha, 1e-4 * std::max(eps, 1e-3));
  const double right_expected = 1.0 / (2.0 * std::sqrt(eps + expected));
  ExperimentResult r;
  r.table.header = {"epsilon", "alpha", "alpha_closed_form", "abs_error", "left_derivative", "right_derivative",
                    "right_expected"};
  r.table.add_row({num(eps), num(alpha), num(expected), num(std::abs(alpha - expected)), num(left), num(right),
                   num(right_expected)});
  r.pass = std::abs(alpha - expected) <= 1e-6 && std::abs(left + 1.0) <= 1e-3 &&
           std::abs(right - right_expected) <= 1e-3;
  r.summary = "minimizer " + num(alpha) + " (closed form " + num(expected) + ")";
  return r;
}

ExperimentResult root_k_calm(const ReproduceOptions& opt) {
  ExperimentResult r;
  r.table.header = {"k", "epsilon", "calm_est", "expected", "rel_error", "within_1pct"};
  r.pass = true;
  for (int k : {2, 3}) {
    const Fixture fx = load_fixture("root_k", {{"k", k}});
    const RobustEvaluator ev(*fx.model, fx.domain, {}, opt.exec);
    for (double e : {1e-3, 1e-2, 1e-1}) {
      const double est = calm_from_profile(ev.profile(fx.reference_point), e).value;
      const double ref = fx.closed_forms.at("profile_derivative")(e);
      const bool ok = rel_err(est, ref) <= 0.01;
      r.pass = r.pass && ok;
      r.table.add_row({std::to_string(k), num(e), num(est), num(ref), num(rel_err(est, ref)), yes(ok)});
    }
  }
  r.summary = "profile-derivative calmness of x^(1/k)";
  return r;
}

ExperimentResult example24b_moduli(const ReproduceOptions& opt) {
  const Fixture fx = load_fixture("example24b");
  SamplingConfig sc;
  sc.radii = {1e-2, 1e-3};
  sc.samples_per_radius = 50000;
  sc.seed = opt.seed;
  const PointFn F = fx.model->as_point_fn();
  const ModulusEstimate calm = calm_direct(F, fx.domain, fx.reference_point, sc, opt.exec);
  const ModulusEstimate lip = lip_direct(F, fx.domain, fx.reference_point, sc, opt.exec);
  const double calm_ref = 2.0 / std::sqrt(5.0), lip_ref = 2.0;
  ExperimentResult r;
  r.table.header = {"quantity", "estimate", "expected", "rel_error", "samples", "infinite"};
  r.table.add_row({"calm", num(calm.value), num(calm_ref), num(rel_err(calm.value, calm_ref)),
                   std::to_string(calm.samples), yes(calm.infinite)});
  r.table.add_row({"lip", num(lip.value), num(lip_ref), num(rel_err(lip.value, lip_ref)), std::to_string(lip.samples),
                   yes(lip.infinite)});
  r.pass = rel_err(calm.value, calm_ref) <= 0.02 && rel_err(lip.value, lip_ref) <= 0.02;
  r.summary = "calm " + num(calm.value) + ", lip " + num(lip.value);
  return r;
}

double uni(Rng& rng, double lo, double hi) { return rng.uniform(lo, hi); }

Mat random_mat(Rng& rng, Eigen::Index m, Eigen::Index n) {
  Mat A(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = uni(rng, -2.0, 2.0);
  }
  return A;
}

Vec random_vec(Rng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(rng, -2.0, 2.0);
  return v;
}

ExperimentResult sdp_norm(const ReproduceOptions& opt) {
  constexpr std::size_t kCount = 50;
  std::vector<std::vector<std::string>> rows(kCount);
  std::vector<char> ok(kCount, 0);
  for_each_index(opt.exec, kCount, [&](std::size_t i) {
    Rng rng = Rng::for_index(opt.seed, 0x5d0, i);
    const auto m = static_cast<Eigen::Index>(1 + std::min(3.0, std::floor(4.0 * rng.uniform())));
    const auto n = static_cast<Eigen::Index>(1 + std::min(3.0, std::floor(4.0 * rng.uniform())));
    lmi::NormInstance inst;
    inst.A = random_mat(rng, m, n);
    inst.b = random_vec(rng, m);
    inst.x = random_vec(rng, n);
    inst.eps = uni(rng, 0.1, 1.0);
    const double oracle = robust_value_affine_norm(inst.A, inst.b, inst.x, inst.eps);
    const double value = lmi::robust_value_via_norm_lmi(inst).value;
    const bool below = !lmi::feasible_norm(inst, oracle - 1e-3).feasible;
    const double gap = std::abs(value - oracle);
    ok[i] = gap <= 1e-5 * (1.0 + std::abs(oracle)) && below;
    rows[i] = {std::to_string(i), std::to_string(m), std::to_string(n), num(inst.eps), num(value), num(oracle),
               num(gap), yes(below), yes(ok[i])};
  });
  ExperimentResult r;
  r.table.header = {"instance", "m", "n", "epsilon", "lmi_value", "oracle", "abs_gap", "below_infeasible", "ok"};
  for (auto& row : rows) r.table.add_row(std::move(row));
  const auto good = std::count(ok.begin(), ok.end(), 1);
  r.pass = good == static_cast<long>(kCount);
  r.summary = std::to_string(good) + "/" + std::to_string(kCount) + " instances agree";
  return r;
}

ExperimentResult sdp_quad(const ReproduceOptions& opt) {
  constexpr std::size_t kCount = 50;
  std::vector<std::vector<std::string>> rows(kCount);
  std::vector<char> ok(kCount, 0);
  for_each_index(opt.exec, kCount, [&](std::size_t i) {
    Rng rng = Rng::for_index(opt.seed, 0x5d1, i);
    const auto n = static_cast<Eigen::Index>(1 + std::min(3.0, std::floor(4.0 * rng.uniform())));
    const Mat M = random_mat(rng, n, n);
    lmi::QuadInstance inst;
    inst.H = M.transpose() * M + 0.1 * Mat::Identity(n, n);
    inst.c = random_vec(rng, n);
    inst.d = uni(rng, -2.0, 2.0);
    inst.x = random_vec(rng, n);
    inst.eps = uni(rng, 0.1, 1.0);
    const double oracle = maximize_quadratic_on_ball(inst.H, inst.c, inst.d, inst.x, inst.eps).value;
    const double value = lmi::robust_value_via_quad_lmi(inst).value;
    const double rel = std::abs(value - oracle) / (1.0 + std::abs(oracle));
    ok[i] = rel <= 1e-5;
    rows[i] = {std::to_string(i), std::to_string(n), num(inst.eps), num(value), num(oracle), num(rel), yes(ok[i])};
  });
  ExperimentResult r;
  r.table.header = {"instance", "n", "epsilon", "lmi_value", "oracle", "rel_gap", "ok"};
  for (auto& row : rows) r.table.add_row(std::move(row));
  const auto good = std::count(ok.begin(), ok.end(), 1);
  r.pass = good == static_cast<long>(kCount);
  r.summary = std::to_string(good) + "/" + std::to_string(kCount) + " instances agree";
  return r;
}

ExperimentResult jordan2_abscissa(const ReproduceOptions& opt) {
  const Fixture fx = load_fixture("jordan2");
  const CMat J = fx.matrix->cast<pseudo::Complex>();
  CMat D = CMat::Zero(2, 2);
  D(0, 0) = -1.0;
  D(1, 1) = -2.0;
  ExperimentResult r;
  r.table.header = {"matrix", "epsilon", "value", "expected", "abs_error", "sigma_at_arg", "ok"};
  r.pass = true;
  auto add = [&](const char* name, const CMat& A, double e, double expected, double tol) {
    const pseudo::Result res = pseudo::pseudospectral_abscissa(A, e, {}, opt.exec);
    const double err = std::abs(res.value - expected);
    const bool ok = err <= tol;
    r.pass = r.pass && ok;
    r.table.add_row({name, num(e), num(res.value), num(expected), num(err),
                     num(pseudo::sigma_min_resolvent(A, res.arg)), yes(ok)});
  };
  for (double e : {1e-3, 1e-2, 1e-1}) add("jordan2", J, e, fx.closed_forms.at("profile")(e), 1e-4);
  for (double e : {1e-3, 1e-2, 1e-1}) add("diag(-1,-2)", D, e, -1.0 + e, 1e-6);
  add("jordan2", J, 0.0, pseudo::spectral_abscissa(J), 1e-6);
  add("diag(-1,-2)", D, 0.0, pseudo::spectral_abscissa(D), 1e-6);
  r.summary = "pseudospectral abscissa against closed forms";
  return r;
}

ExperimentResult o_one_over_eps(const ReproduceOptions& opt) {
  const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
  SearchConfig sc;
  sc.samples = 256;
  sc.seed = opt.seed;
  const Fixture j = load_fixture("jordan2");
  const Fixture s = load_fixture("sqrt_abs_2d");
  const RobustEvaluator ej(*j.model, j.domain, sc, opt.exec);
  const RobustEvaluator es(*s.model, s.domain, sc, opt.exec);
  ExperimentResult r;
  r.table.header = {"case", "epsilon", "calm_est", "eps_times_calm"};
  r.pass = true;
  std::string summary;
  for (const auto& [name, ev, x] : {std::tuple{"jordan2", &ej, j.reference_point},
                                    std::tuple{"sqrt_abs_2d", &es, s.reference_point}}) {
    const OOneOverEpsReport rep = o_one_over_eps_report(ev->profile(x), grid, 10.0);
    for (const auto& row : rep.rows) r.table.add_row({name, num(row.eps), num(row.calm), num(row.eps_calm)});
    r.pass = r.pass && rep.pass;
    summary += std::string(summary.empty() ? "" : ", ") + name + " decrease " + num(rep.decrease);
  }
  r.summary = summary;
  return r;
}

ExperimentResult calm_lip_agreement(const ReproduceOptions& opt) {
  const std::vector<double> grid{1e-1, 1e-2};
  SearchConfig sc;
  sc.samples = 256;
  sc.refine_starts = 2;
  sc.seed = opt.seed;
  AgreementConfig ac;
  ac.seed = opt.seed;
  const Fixture s = load_fixture("sqrt_abs_2d");
  const Fixture in = load_fixture("intro1d");
  const RobustEvaluator es(*s.model, s.domain, sc, opt.exec);
  const RobustEvaluator ei(*in.model, in.domain, sc, opt.exec);
  const AgreementReport a = calm_lip_agreement_report(es, s.reference_point, grid, ac, opt.exec);
  const AgreementReport b =
      calm_lip_agreement_report(ei, [](double e) { return Vec::Constant(1, intro_alpha(e)); }, grid, ac, opt.exec);
  ExperimentResult r;
  r.table.header = {"case", "epsilon", "calm_est", "lip_est", "gap_rel", "flags"};
  for (const auto& [name, rep] : {std::pair{"sqrt_abs_2d", &a}, std::pair{"intro1d", &b}}) {
    for (const auto& row : rep->rows) {
      std::string flags;
      for (const auto& f : row.flags) flags += (flags.empty() ? "" : "|") + f;
      r.table.add_row({name, num(row.eps), num(row.calm_est), num(row.lip_est), num(row.gap_rel), flags});
    }
  }
  r.pass = a.pass && b.pass;
  r.summary = "calm and lip of the regularization at non-Lipschitz points";
  return r;
}

ExperimentResult square_peaceful(const ReproduceOptions& opt) {
  const Fixture fx = load_fixture("unit_square");
  geom::SetmapConfig cfg;
  cfg.seed = opt.seed;
  const geom::PeacefulProfile p = geom::peaceful_profile(fx.domain, fx.reference_point, {0.2, 0.1, 0.05}, cfg, 0.05,
                                                         opt.exec);
  ExperimentResult r;
  r.table.header = {"epsilon", "setmap_lip", "pairs", "min_cloud", "in_band"};
  r.pass = p.one_peaceful;
  for (const auto& row : p.rows) {
    const bool ok = row.value >= 0.95 && row.value <= 1.05;
    r.pass = r.pass && ok;
    r.table.add_row({num(row.eps), num(row.value), std::to_string(row.pairs), std::to_string(row.min_cloud), yes(ok)});
  }
  r.summary = "unit square ball-intersection map near the centre";
  return r;
}

ExperimentResult crossed_axes_radial(const ReproduceOptions& opt) {
  const Fixture fx = load_fixture("crossed_axes");
  geom::ShellConfig sc;
  sc.seed = opt.seed;
  const geom::GeometryReport radial = geom::nearly_radial_profile(fx.domain, fx.reference_point, sc);
  geom::ShellConfig cc = sc;
  const geom::GeometryReport convex = geom::nearly_convex_profile(fx.domain, fx.reference_point, cc, fx.witness_pairs);
  ExperimentResult r;
  r.table.header = {"diagnostic", "scale", "ratio", "samples"};
  r.pass = true;
  for (const auto& s : radial.shells) {
    r.pass = r.pass && s.max_ratio == 0.0 && s.samples > 0;
    r.table.add_row({"nearly_radial_shell", num(s.radius), num(s.max_ratio), std::to_string(s.samples)});
  }
  for (const auto& w : convex.witnesses) {
    r.pass = r.pass && w.ratio >= 0.70;
    r.table.add_row({"nearly_convex_witness", num(w.x.norm()), num(w.ratio), "1"});
  }
  r.summary = std::string("nearly radial ") + (radial.pass ? "PASS" : "FAIL") + ", nearly convex " +
              (convex.pass ? "PASS" : "FAIL");
  return r;
}

ExperimentResult epi_dyadic_fail(const ReproduceOptions& opt) {
  const Fixture fx = load_fixture("epi_dyadic");
  geom::ShellConfig sc;
  sc.seed = opt.seed;
  sc.radii = {0.5, 0.125, 0.03125};
  const geom::GeometryReport rep = geom::nearly_radial_profile(fx.domain, fx.reference_point, sc, fx.witness_points);
  ExperimentResult r;
  r.table.header = {"kind", "n_or_radius", "ratio", "expected", "abs_error"};
  r.pass = true;
  const double expected = 1.0 / std::numbers::sqrt2;
  for (const auto& s : rep.shells) r.table.add_row({"shell", num(s.radius), num(s.max_ratio), "", ""});
  for (const auto& w : rep.witnesses) {
    const int n = static_cast<int>(std::lround(-std::log2(w.x[0])));
    if (n < 3 || n > 10) continue;
    const double err = std::abs(w.ratio - expected);
    r.pass = r.pass && err <= 1e-6;
    r.table.add_row({"witness", std::to_string(n), num(w.ratio), num(expected), num(err)});
  }
  r.summary = std::string("nearly radial verdict ") + (rep.pass ? "PASS" : "FAIL") + " (expected FAIL)";
  r.pass = r.pass && !rep.pass;
  return r;
}

ExperimentResult cone_pythagoras(const ReproduceOptions& opt) {
  constexpr std::size_t kCount = 100;
  std::vector<std::vector<std::string>> rows(kCount);
  std::vector<char> ok(kCount, 0);
  for_each_index(opt.exec, kCount, [&](std::size_t i) {
    Rng rng = Rng::for_index(opt.seed, 0xc0e, i);
    const auto k = static_cast<Eigen::Index>(1 + std::min(5.0, std::floor(6.0 * rng.uniform())));
    Mat G(3, k);
    for (Eigen::Index j = 0; j < k; ++j) G.col(j) = rng.normal_vector(3);
    const bool by_generators = i % 2 == 0;
    const geom::Cone C = by_generators ? geom::Cone::generators(G) : geom::Cone::halfspaces(G.transpose());
    const geom::Cone P = C.polar();
    const Vec v = rng.normal_vector(3);
    const double a = C.distance(v), b = P.distance(v);
    const double err = std::abs(a * a + b * b - v.squaredNorm()) / v.squaredNorm();
    ok[i] = err <= 1e-8;
    rows[i] = {std::to_string(i), by_generators ? "generators" : "halfspaces", std::to_string(k), num(a), num(b),
               num(v.norm()), num(err), yes(ok[i])};
  });
  ExperimentResult r;
  r.table.header = {"instance", "representation", "facets", "dist_cone", "dist_polar", "norm_v", "rel_error", "ok"};
  for (auto& row : rows) r.table.add_row(std::move(row));
  const auto good = std::count(ok.begin(), ok.end(), 1);
  r.pass = good == static_cast<long>(kCount);
  r.summary = std::to_string(good) + "/" + std::to_string(kCount) + " identities within 1e-8";
  return r;
}

using Runner = ExperimentResult (*)(const ReproduceOptions&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m{
      {"intro1d-minimizer", intro1d_minimizer}, {"root-k-calm", root_k_calm},
      {"example24b-moduli", example24b_moduli}, {"sdp-norm-equivalence", sdp_norm},
      {"sdp-quad-equivalence", sdp_quad},       {"jordan2-abscissa", jordan2_abscissa},
      {"o-one-over-eps", o_one_over_eps},       {"calm-lip-agreement", calm_lip_agreement},
      {"square-peaceful", square_peaceful},     {"crossed-axes-radial", crossed_axes_radial},
      {"epi-dyadic-fail", epi_dyadic_fail},     {"cone-pythagoras", cone_pythagoras}};
  return m;
}

}  // namespace

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids{"intro1d-minimizer",  "root-k-calm",        "example24b-moduli",
                                            "sdp-norm-equivalence", "sdp-quad-equivalence", "jordan2-abscissa",
                                            "o-one-over-eps",     "calm-lip-agreement", "square-peaceful",
                                            "crossed-axes-radial", "epi-dyadic-fail",    "cone-pythagoras"};
  return ids;
}

ExperimentResult reproduce(const std::string& id, const ReproduceOptions& opt) {
  const auto it = runners().find(id);
  if (it == runners().end()) throw ConfigError("unknown reproduce id '" + id + "'");
  if (opt.eps && id != "intro1d-minimizer") throw ConfigError("reproduce " + id + " does not take --eps");
  ExperimentResult r = it->second(opt);
  std::string canonical = "id=" + id + ";seed=" + std::to_string(opt.seed);
  if (opt.eps) canonical += ";eps=" + num(*opt.eps);
  r.table.meta.insert(r.table.meta.begin(), {{"tool", "robreg"},
                                             {"version", ROBREG_VERSION},
                                             {"command", "reproduce"},
                                             {"id", id},
                                             {"seed", std::to_string(opt.seed)},
                                             {"config_hash", report::hex64(report::fnv1a(canonical))},
                                             {"verdict", r.pass ? "PASS" : "FAIL"}});
  return r;
}

}  // namespace robreg
