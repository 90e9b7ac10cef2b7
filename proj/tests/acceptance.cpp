// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// The reproduce experiments carry their own verdicts; here every number is
// re-checked against values computed in this file.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robreg/cones.hpp"
#include "robreg/experiments.hpp"
#include "robreg/fixtures.hpp"
#include "robreg/geometry.hpp"
#include "robreg/lmi.hpp"
#include "robreg/parallel.hpp"
#include "robreg/report.hpp"

using namespace robreg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::size_t column(const report::Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == name) return i;
  }
  throw std::runtime_error("no column " + name);
}

double cell(const report::Table& t, std::size_t row, const std::string& name) {
  return std::stod(t.rows.at(row).at(column(t, name)));
}

std::string str(const report::Table& t, std::size_t row, const std::string& name) {
  return t.rows.at(row).at(column(t, name));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentResult run(const std::string& id, std::optional<double> eps = std::nullopt) {
  return reproduce(id, {1, eps, Exec::Parallel});
}

Outcome c1_intro() {
  Outcome o;
  const double eps = 0.25;
  const ExperimentResult r = run("intro1d-minimizer", eps);
  const double alpha = oracle::intro_alpha(eps);
  const double a = cell(r.table, 0, "alpha"), left = cell(r.table, 0, "left_derivative"),
               right = cell(r.table, 0, "right_derivative");
  const double right_ref = 1.0 / (2.0 * std::sqrt(eps + alpha));
  o.require(std::abs(a - alpha) <= 1e-6, "minimizer " + fmt(a));
  o.require(std::abs(left + 1.0) <= 1e-3, "left slope " + fmt(left));
  o.require(std::abs(right - right_ref) <= 1e-3, "right slope " + fmt(right));
  o.require(std::abs(alpha + 0.116025404) <= 1e-9, "closed form");
  o.require(r.pass, "verdict");
  o.detail = o.pass ? "alpha " + fmt(a) + ", slopes " + fmt(left) + " / " + fmt(right) : o.detail;
  return o;
}

Outcome c2_root_k() {
  Outcome o;
  const ExperimentResult r = run("root-k-calm");
  o.require(r.table.rows.size() == 6, "row count");
  double worst = 0.0;
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    const double k = cell(r.table, i, "k"), e = cell(r.table, i, "epsilon");
    const double ref = std::pow(e, 1.0 / k - 1.0) / k;
    const double rel = std::abs(cell(r.table, i, "calm_est") - ref) / ref;
    worst = std::max(worst, rel);
    o.require(rel <= 0.01, "k=" + fmt(k) + " eps=" + fmt(e) + " rel " + fmt(rel));
  }
  if (o.pass) o.detail = "worst relative error " + fmt(worst);
  return o;
}

Outcome c3_example24b() {
  Outcome o;
  const ExperimentResult r = run("example24b-moduli");
  const double calm = cell(r.table, 0, "estimate"), lip = cell(r.table, 1, "estimate");
  const double calm_ref = 2.0 / std::sqrt(5.0);
  o.require(std::abs(calm - calm_ref) <= 0.02 * calm_ref, "calm " + fmt(calm));
  o.require(std::abs(lip - 2.0) <= 0.04, "lip " + fmt(lip));
  o.require(cell(r.table, 1, "samples") >= 0.9e5, "lip samples");
  if (o.pass) o.detail = "calm " + fmt(calm) + ", lip " + fmt(lip);
  return o;
}

Eigen::MatrixXd uniform_matrix(std::mt19937_64& g, Eigen::Index m, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::MatrixXd A(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = u(g);
  }
  return A;
}

Outcome c4_norm_lmi() {
  Outcome o;
  o.require(run("sdp-norm-equivalence").pass, "reproduce verdict");
  std::mt19937_64 g(20240601);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> ue(0.1, 1.0);
  int good = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    lmi::NormInstance inst;
    const int m = dim(g), n = dim(g);
    inst.A = uniform_matrix(g, m, n);
    inst.b = uniform_matrix(g, m, 1);
    inst.x = uniform_matrix(g, n, 1);
    inst.eps = ue(g);
    const double ref = oracle::affine_norm_ball_max(inst.A, inst.b, inst.x, inst.eps);
    const double gap = std::abs(lmi::robust_value_via_norm_lmi(inst).value - ref);
    const bool below = !lmi::feasible_norm(inst, ref - 1e-3).feasible;
    worst = std::max(worst, gap / (1.0 + ref));
    if (gap <= 1e-5 * (1.0 + ref) && below) ++good;
  }
  o.require(good == 50, std::to_string(good) + "/50 own instances");
  if (o.pass) o.detail = "50/50 + 50/50, worst scaled gap " + fmt(worst);
  return o;
}

Outcome c5_quad_lmi() {
  Outcome o;
  o.require(run("sdp-quad-equivalence").pass, "reproduce verdict");
  std::mt19937_64 g(20240602);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> ue(0.1, 1.0), ud(-2.0, 2.0);
  int good = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = dim(g);
    const Eigen::MatrixXd M = uniform_matrix(g, n, n);
    lmi::QuadInstance inst;
    inst.H = M.transpose() * M + 0.1 * Eigen::MatrixXd::Identity(n, n);
    inst.c = uniform_matrix(g, n, 1);
    inst.d = ud(g);
    inst.x = uniform_matrix(g, n, 1);
    inst.eps = ue(g);
    const double ref = oracle::quadratic_ball_max(inst.H, inst.c, inst.d, inst.x, inst.eps);
    const double rel = std::abs(lmi::robust_value_via_quad_lmi(inst).value - ref) / (1.0 + std::abs(ref));
    worst = std::max(worst, rel);
    if (rel <= 1e-5) ++good;
  }
  o.require(good == 50, std::to_string(good) + "/50 own instances");
  if (o.pass) o.detail = "50/50 + 50/50, worst relative gap " + fmt(worst);
  return o;
}

Outcome c6_pseudospectra() {
  Outcome o;
  const ExperimentResult r = run("jordan2-abscissa");
  int checked = 0;
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    const std::string m = str(r.table, i, "matrix");
    const double e = cell(r.table, i, "epsilon"), v = cell(r.table, i, "value");
    double ref = 0.0, tol = 1e-6;
    if (m == "jordan2") {
      ref = e == 0.0 ? 0.0 : oracle::jordan2_abscissa(e);
      tol = e == 0.0 ? 1e-6 : 1e-4;
    } else {
      ref = -1.0 + e;
    }
    o.require(std::abs(v - ref) <= tol, m + " eps=" + fmt(e) + " value " + fmt(v));
    ++checked;
  }
  o.require(checked == 8, "row count");
  if (o.pass) o.detail = std::to_string(checked) + " values match";
  return o;
}

Outcome c7_o_one_over_eps() {
  Outcome o;
  const ExperimentResult r = run("o-one-over-eps");
  for (const char* name : {"jordan2", "sqrt_abs_2d"}) {
    double big = -1.0, small = -1.0;
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
      if (str(r.table, i, "case") != name) continue;
      const double e = cell(r.table, i, "epsilon");
      const double ec = e * cell(r.table, i, "calm_est");
      if (e == 1e-1) big = ec;
      if (e == 1e-4) small = ec;
    }
    const double ratio = big / small;
    o.require(big > 0.0 && small > 0.0 && ratio >= 10.0, std::string(name) + " ratio " + fmt(ratio));
    o.detail += (o.pass ? std::string(o.detail.empty() ? "" : ", ") + name + " " + fmt(ratio) + "x" : "");
  }
  return o;
}

Outcome c8_calm_lip() {
  Outcome o;
  const ExperimentResult r = run("calm-lip-agreement");
  o.require(r.table.rows.size() == 4, "row count");
  double worst = 0.0;
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    const double calm = cell(r.table, i, "calm_est"), lip = cell(r.table, i, "lip_est");
    const double gap = std::abs(calm - lip) / std::max(calm, lip);
    worst = std::max(worst, gap);
    o.require(std::isfinite(lip) && gap <= 0.05,
              str(r.table, i, "case") + " eps=" + str(r.table, i, "epsilon") + " gap " + fmt(gap));
  }
  if (o.pass) o.detail = "worst gap " + fmt(worst);
  return o;
}

Outcome c9_sets() {
  Outcome o;
  const ExperimentResult sq = run("square-peaceful");
  for (std::size_t i = 0; i < sq.table.rows.size(); ++i) {
    const double v = cell(sq.table, i, "setmap_lip");
    o.require(v >= 0.95 && v <= 1.05, "square eps=" + str(sq.table, i, "epsilon") + " " + fmt(v));
  }
  const ExperimentResult ca = run("crossed-axes-radial");
  int shells = 0, witnesses = 0;
  for (std::size_t i = 0; i < ca.table.rows.size(); ++i) {
    const double v = cell(ca.table, i, "ratio");
    if (str(ca.table, i, "diagnostic") == "nearly_radial_shell") {
      ++shells;
      o.require(v == 0.0 && cell(ca.table, i, "samples") > 0, "crossed shell " + fmt(v));
    } else {
      ++witnesses;
      o.require(v >= 0.70, "crossed witness " + fmt(v));
    }
  }
  o.require(shells >= 3 && witnesses >= 1, "crossed rows");
  const ExperimentResult ed = run("epi-dyadic-fail");
  std::vector<int> seen;
  for (std::size_t i = 0; i < ed.table.rows.size(); ++i) {
    if (str(ed.table, i, "kind") != "witness") continue;
    const int n = std::stoi(str(ed.table, i, "n_or_radius"));
    seen.push_back(n);
    const double v = cell(ed.table, i, "ratio");
    o.require(std::abs(v - 1.0 / std::numbers::sqrt2) <= 1e-6, "dyadic n=" + std::to_string(n) + " " + fmt(v));
  }
  o.require(seen == std::vector<int>{3, 4, 5, 6, 7, 8, 9, 10}, "dyadic witness set");
  if (o.pass) o.detail = "square in band, crossed shells exactly 0, dyadic 1/sqrt2 at n=3..10";
  return o;
}

Outcome c10_cones() {
  Outcome o;
  o.require(run("cone-pythagoras").pass, "reproduce verdict");
  std::mt19937_64 g(20240610);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> kd(1, 6);
  int good = 0;
  double worst = 0.0, worst_ref = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int k = kd(g);
    Eigen::MatrixXd R(3, k);
    for (double& x : R.reshaped()) x = nd(g);
    Eigen::VectorXd v(3);
    for (double& x : v) x = nd(g);
    const geom::Cone C = i % 2 ? geom::Cone::halfspaces(R.transpose()) : geom::Cone::generators(R);
    const geom::Cone P = C.polar();
    const double a = C.distance(v), b = P.distance(v);
    const double err = std::abs(a * a + b * b - v.squaredNorm()) / v.squaredNorm();
    worst = std::max(worst, err);
    if (err <= 1e-8) ++good;
    if (i % 2 == 0) {
      // Exact projection against the slow iterative one; it crawls when v is
      // inside the cone and the multipliers are not unique.
      const double ref = (v - geom::project_generators_iterative(R, v, 200000)).norm();
      worst_ref = std::max(worst_ref, std::abs(ref - a));
    }
  }
  o.require(good == 100, std::to_string(good) + "/100 own identities");
  o.require(worst_ref <= 1e-6, "exact vs iterative projection " + fmt(worst_ref));
  if (o.pass) o.detail = "100/100 + 100/100, worst " + fmt(worst) + ", projection check " + fmt(worst_ref);
  return o;
}

Outcome c11_lip_bound() {
  Outcome o;
  const Fixture f = load_fixture("quad");
  const auto* q = f.model->get_if<QuadraticFn>();
  const double eps = 0.1;
  geom::LipBoundConfig cfg;
  const geom::LipBoundReport rep = geom::lip_upper_bound_check(*f.model, f.domain, f.reference_point, {eps}, cfg);
  const double bound = oracle::affine_norm_ball_max(2.0 * q->H, 2.0 * q->c, f.reference_point, eps);
  const double lip = rep.rows.at(0).lip_fbar;
  o.require(lip <= 1.05 * bound, "lip " + fmt(lip) + " vs bound " + fmt(bound));
  o.require(lip > 0.0, "lip estimate is zero");
  if (o.pass) o.detail = "lip " + fmt(lip) + " <= 1.05 x " + fmt(bound);
  return o;
}

Outcome c12_determinism() {
  Outcome o;
  for (const auto& id : reproduce_ids()) {
    set_thread_count(4);
    const std::string a = report::to_csv(reproduce(id, {1, std::nullopt, Exec::Parallel}).table);
    const std::string b = report::to_csv(reproduce(id, {1, std::nullopt, Exec::Parallel}).table);
    set_thread_count(1);
    const std::string c = report::to_csv(reproduce(id, {1, std::nullopt, Exec::Parallel}).table);
    const std::string s = report::to_csv(reproduce(id, {1, std::nullopt, Exec::Serial}).table);
    o.require(a == b, id + " differs across runs");
    o.require(a == c && a == s, id + " differs across execution modes");
  }
  set_thread_count(4);
  if (o.pass) o.detail = std::to_string(reproduce_ids().size()) + " ids byte-identical (4 threads x2, 1 thread, serial)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> all{
      {1, "intro minimizer and one-sided slopes", 1, c1_intro},
      {2, "calm of root_k from the profile", 1, c2_root_k},
      {3, "example moduli calm 2/sqrt5, lip 2", 10, c3_example24b},
      {4, "norm LMI equals affine-norm oracle", 30, c4_norm_lmi},
      {5, "quadratic LMI equals trust-region oracle", 60, c5_quad_lmi},
      {6, "pseudospectral abscissa closed forms", 10, c6_pseudospectra},
      {7, "eps * calm decreases 10x", 10, c7_o_one_over_eps},
      {8, "calm and lip agree for small eps", 30, c8_calm_lip},
      {9, "set geometry fixtures", 30, c9_sets},
      {10, "cone polarity Pythagoras", 5, c10_cones},
      {11, "Lipschitz upper bound on convex X", 10, c11_lip_bound},
      {12, "determinism across runs and execution modes", 600, c12_determinism},
  };
  set_thread_count(4);
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "took " + fmt(secs) + " s, budget " + fmt(c.budget_s) + " s");
    std::printf("criterion %2d %s  %-44s %7.3fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
