// robreg command-line front end.
//
// Exit codes: 0 success, 1 reproduce threshold failure, 2 configuration
// error, 3 computation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robreg/experiments.hpp"
#include "robreg/fixtures.hpp"
#include "robreg/geometry.hpp"
#include "robreg/lmi.hpp"
#include "robreg/moduli.hpp"
#include "robreg/pseudospec.hpp"
#include "robreg/regularize.hpp"
#include "robreg/report.hpp"
#include "robreg/sdpa.hpp"
#include "robreg/setmap.hpp"

namespace {

using namespace robreg;
using report::num;

constexpr int kThresholdFailure = 1;
constexpr int kConfigError = 2;
constexpr int kComputationError = 3;

struct Common {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string exec = "parallel";
  std::string out;
};

struct ModelArgs {
  std::string fixture;
  std::vector<std::string> params;
  std::string expr;
  int dim = 0;
  std::string x;
  std::size_t samples = SearchConfig{}.samples;
  std::size_t refine_starts = SearchConfig{}.refine_starts;
};

void add_model_options(CLI::App* sub, ModelArgs& m) {
  sub->add_option("--fixture", m.fixture, "Named fixture (see `robreg fixtures`)");
  sub->add_option("--param", m.params, "Fixture parameter key=value (repeatable)");
  sub->add_option("--expr", m.expr, "Expression in x1..xn over the full space");
  sub->add_option("--dim", m.dim, "Dimension of --expr")->capture_default_str();
  sub->add_option("--x", m.x, "Base point as a JSON array (default: fixture reference point)");
  sub->add_option("--samples", m.samples, "Search samples per robust value")->capture_default_str();
  sub->add_option("--refine-starts", m.refine_starts, "Search starts refined locally")->capture_default_str();
}

FixtureParams parse_params(const std::vector<std::string>& kv) {
  FixtureParams p;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + s + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      p[s.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw ConfigError("--param value is not a number: '" + s + "'");
    }
  }
  return p;
}

struct Problem {
  FunctionModel model;
  DomainModel domain;
  Vec x;
};

Fixture fixture_from(const ModelArgs& m) { return load_fixture(m.fixture, parse_params(m.params)); }

Problem problem_from(const ModelArgs& m) {
  if (!m.fixture.empty() == !m.expr.empty()) throw ConfigError("give exactly one of --fixture and --expr");
  if (!m.fixture.empty()) {
    Fixture f = fixture_from(m);
    if (!f.model) throw ConfigError("fixture '" + m.fixture + "' is a set fixture without a function");
    Vec x = m.x.empty() ? f.reference_point : report::parse_vector(m.x);
    return {*f.model, f.domain, x};
  }
  if (m.dim <= 0) throw ConfigError("--expr needs --dim");
  if (m.x.empty()) throw ConfigError("--expr needs --x");
  return {FunctionModel::expression(m.expr, m.dim), DomainModel::full_space(m.dim), report::parse_vector(m.x)};
}

SearchConfig search_from(const ModelArgs& m, const Common& c) {
  SearchConfig s;
  s.samples = m.samples;
  s.refine_starts = m.refine_starts;
  s.seed = c.seed;
  return s;
}

std::vector<double> parse_grid(const std::string& text, const char* what) {
  const Vec v = report::parse_vector(text);
  if (v.size() == 0) throw ConfigError(std::string(what) + ": empty");
  return {v.data(), v.data() + v.size()};
}

Exec exec_from(const Common& c) {
  if (c.exec == "serial") return Exec::Serial;
  if (c.exec == "parallel") return Exec::Parallel;
  throw ConfigError("--exec must be serial or parallel");
}

// Every option of the subcommand and the app (threads, out and config excluded)
// with its effective value, in declaration order.
std::vector<std::pair<std::string, std::string>> effective_options(const CLI::App& app, const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* o : a->get_options()) {
      const std::string name = o->get_single_name();
      if (name.empty() || name == "help" || name == "version" || name == "threads" || name == "out" ||
          name == "config") {
        continue;
      }
      std::string value;
      if (o->count() > 0) {
        for (const auto& r : o->results()) value += (value.empty() ? "" : " ") + r;
      } else {
        value = o->get_default_str();
      }
      for (char& ch : value) {
        if (ch == ';' || ch == '\n') ch = ',';
      }
      out.emplace_back(name, value);
    }
  }
  return out;
}

void stamp(report::Table& t, const CLI::App& app, const CLI::App& sub) {
  const auto opts = effective_options(app, sub);
  std::string canonical = sub.get_name();
  for (const auto& [k, v] : opts) canonical += ";" + k + "=" + v;
  std::vector<std::pair<std::string, std::string>> meta{{"tool", "robreg"},
                                                        {"version", ROBREG_VERSION},
                                                        {"command", sub.get_name()},
                                                        {"config_hash", report::hex64(report::fnv1a(canonical))}};
  meta.insert(meta.end(), opts.begin(), opts.end());
  meta.insert(meta.end(), t.meta.begin(), t.meta.end());
  t.meta = std::move(meta);
}

void emit(const std::string& text, const Common& c) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw ConfigError("cannot open --out file " + c.out);
  os << text;
  if (!os) throw Error("writing " + c.out + " failed");
}

// ---------------------------------------------------------------------------

report::Table run_regularize(const ModelArgs& m, double eps, const Common& c) {
  const Problem p = problem_from(m);
  const RobustEvaluator ev(p.model, p.domain, search_from(m, c), exec_from(c));
  report::Table t;
  t.header = {"epsilon", "value", "base_value", "method"};
  t.add_row({num(eps), num(ev.value(p.x, eps)), num(p.model.eval(p.x)), to_string(ev.method(p.x, eps))});
  return t;
}

report::Table run_profile(const ModelArgs& m, const std::string& grid_text, bool derivative, const Common& c) {
  const Problem p = problem_from(m);
  const RadiusSpec grid(parse_grid(grid_text, "--eps-grid"));
  const SearchConfig sc = search_from(m, c);
  const RobustProfile prof = epsilon_profile(p.model, p.domain, p.x, grid, sc, exec_from(c));
  const RobustEvaluator ev(p.model, p.domain, sc, exec_from(c));
  report::Table t;
  t.header = {"epsilon", "value", "method", "calm_est", "flags"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool violation = std::find(prof.monotonicity_violations.begin(), prof.monotonicity_violations.end(), i) !=
                           prof.monotonicity_violations.end();
    const std::string calm = derivative ? num(calm_from_profile(ev.profile(p.x), grid[i]).value) : "";
    t.add_row({num(grid[i]), num(prof.values[i]), to_string(prof.methods[i]), calm, violation ? "decrease" : ""});
  }
  t.add_meta("monotone", prof.monotone() ? "1" : "0");
  return t;
}

struct ModuliArgs {
  std::string kind = "both";
  std::string radii = "[0.01, 0.001]";
  std::size_t per_radius = 2000;
  double regularized = 0.0;
  std::string eps_grid = "[0.1, 0.01]";
  double eps = 0.0;
  double tolerance = 0.05;
};

report::Table run_moduli(const ModelArgs& m, const ModuliArgs& a, const Common& c) {
  const Problem p = problem_from(m);
  const Exec exec = exec_from(c);
  const SearchConfig sc = search_from(m, c);
  const RobustEvaluator ev(p.model, p.domain, sc, exec);
  report::Table t;
  if (a.kind == "agreement") {
    AgreementConfig ac;
    ac.seed = c.seed;
    ac.tolerance = a.tolerance;
    const AgreementReport rep = calm_lip_agreement_report(ev, p.x, parse_grid(a.eps_grid, "--eps-grid"), ac, exec);
    t.header = {"epsilon", "calm_est", "lip_est", "gap_rel", "flags"};
    for (const auto& r : rep.rows) {
      std::string flags;
      for (const auto& f : r.flags) flags += (flags.empty() ? "" : "|") + f;
      t.add_row({num(r.eps), num(r.calm_est), num(r.lip_est), num(r.gap_rel), flags});
    }
    t.add_meta("verdict", rep.pass ? "PASS" : "FAIL");
    return t;
  }
  if (a.kind == "profile") {
    if (!(a.eps > 0.0)) throw ConfigError("--kind profile needs --eps > 0");
    const ModulusEstimate e = calm_from_profile(ev.profile(p.x), a.eps);
    t.header = {"epsilon", "left", "right", "calm_est"};
    t.add_row({num(a.eps), num(*e.left), num(*e.right), num(e.value)});
    return t;
  }
  SamplingConfig s;
  s.radii = parse_grid(a.radii, "--radii");
  s.samples_per_radius = a.per_radius;
  s.seed = c.seed;
  const PointFn F = a.regularized > 0.0 ? ev.at(a.regularized) : p.model.as_point_fn();
  std::vector<ModulusEstimate> est;
  if (a.kind == "calm" || a.kind == "both") est.push_back(calm_direct(F, p.domain, p.x, s, exec));
  if (a.kind == "lip" || a.kind == "both") est.push_back(lip_direct(F, p.domain, p.x, s, exec));
  if (a.kind == "limsup") {
    LimsupConfig lc;
    lc.neighborhoods = s.radii;
    lc.inner.seed = c.seed;
    est.push_back(lip_via_calm_limsup(F, p.domain, p.x, lc, exec));
  }
  if (est.empty()) throw ConfigError("--kind must be calm, lip, both, limsup, profile or agreement");
  t.header = {"kind", "method", "radius", "shell_max", "samples", "estimate", "infinite", "flags"};
  for (const auto& e : est) {
    std::string flags;
    for (const auto& f : e.flags) flags += (flags.empty() ? "" : "|") + f;
    for (const auto& sh : e.shells) {
      t.add_row({to_string(e.kind), to_string(e.method), num(sh.radius), num(sh.max_ratio), std::to_string(sh.samples),
                 num(e.value), e.infinite ? "1" : "0", flags});
    }
  }
  return t;
}

struct SdpArgs {
  std::string A, A_file, b, H, c, x, sdpa;
  double d = 0.0;
  double eps = 0.0;
  double tol = 1e-10;
};

report::Table run_sdp(const SdpArgs& a) {
  if (!(a.eps > 0.0)) throw ConfigError("--eps must be positive");
  if (a.x.empty()) throw ConfigError("--x is required");
  const Vec x = report::parse_vector(a.x);
  report::Table t;
  t.header = {"kind", "epsilon", "lmi_value", "oracle", "abs_gap", "oracle_minus_1e-3_feasible"};
  const bool quad = !a.H.empty();
  if (quad == (!a.A.empty() || !a.A_file.empty())) throw ConfigError("give either --A/--A-file (norm) or --H (quadratic)");
  if (!quad) {
    lmi::NormInstance inst;
    inst.A = a.A.empty() ? Mat(report::read_matrix_market(a.A_file).real()) : report::parse_matrix(a.A);
    inst.b = a.b.empty() ? Vec::Zero(inst.A.rows()) : report::parse_vector(a.b);
    inst.x = x;
    inst.eps = a.eps;
    const double oracle = robust_value_affine_norm(inst.A, inst.b, inst.x, inst.eps);
    const double value = lmi::robust_value_via_norm_lmi(inst, a.tol).value;
    const bool below = lmi::feasible_norm(inst, oracle - 1e-3).feasible;
    t.add_row({"norm", num(a.eps), num(value), num(oracle), num(std::abs(value - oracle)), below ? "1" : "0"});
    if (!a.sdpa.empty()) sdpa::export_file(a.sdpa, sdpa::from_norm(inst));
  } else {
    lmi::QuadInstance inst;
    inst.H = report::parse_matrix(a.H);
    inst.c = a.c.empty() ? Vec::Zero(inst.H.rows()) : report::parse_vector(a.c);
    inst.d = a.d;
    inst.x = x;
    inst.eps = a.eps;
    const double oracle = robust_value_quadratic(inst.H, inst.c, inst.d, inst.x, inst.eps);
    const double value = lmi::robust_value_via_quad_lmi(inst, a.tol).value;
    const lmi::QuadFactors fac = lmi::quad_factors(inst.H, inst.c);
    const bool below = lmi::feasible_quad(inst, fac, oracle - 1e-3).feasible;
    t.add_row({"quadratic", num(a.eps), num(value), num(oracle), num(std::abs(value - oracle)), below ? "1" : "0"});
    if (!a.sdpa.empty()) sdpa::export_file(a.sdpa, sdpa::from_quad(inst));
  }
  return t;
}

struct PseudoArgs {
  std::string matrix, matrix_file, fixture;
  std::string eps_grid = "[0.001, 0.01, 0.1]";
  std::string quantity = "abscissa";
  int resolution = pseudo::GridConfig{}.resolution;
};

report::Table run_pseudo(const PseudoArgs& a, const Common& c) {
  const int given = !a.matrix.empty() + !a.matrix_file.empty() + !a.fixture.empty();
  if (given != 1) throw ConfigError("give exactly one of --matrix, --matrix-file and --fixture");
  CMat A;
  if (!a.matrix.empty()) A = report::parse_complex_matrix(a.matrix);
  if (!a.matrix_file.empty()) A = report::read_matrix_market(a.matrix_file);
  if (!a.fixture.empty()) {
    const Fixture f = load_fixture(a.fixture);
    if (!f.matrix) throw ConfigError("fixture '" + a.fixture + "' has no matrix");
    A = f.matrix->cast<pseudo::Complex>();
  }
  pseudo::Quantity q;
  if (a.quantity == "abscissa") {
    q = pseudo::Quantity::Abscissa;
  } else if (a.quantity == "radius") {
    q = pseudo::Quantity::Radius;
  } else {
    throw ConfigError("--quantity must be abscissa or radius");
  }
  pseudo::GridConfig g;
  g.resolution = a.resolution;
  report::Table t;
  t.header = {"epsilon", "quantity", "value", "arg_re", "arg_im", "sigma_at_arg", "evaluations", "window_expansions"};
  for (double e : parse_grid(a.eps_grid, "--eps-grid")) {
    if (e < 0.0) throw ConfigError("--eps-grid entries must be >= 0");
    const pseudo::Result r = pseudo::compute({A, e, q, g}, exec_from(c));
    t.add_row({num(e), a.quantity, num(r.value), num(r.arg.real()), num(r.arg.imag()),
               num(pseudo::sigma_min_resolvent(A, r.arg)), std::to_string(r.evaluations),
               std::to_string(r.window_expansions)});
  }
  return t;
}

struct SetsArgs {
  std::string fixture;
  std::vector<std::string> params;
  std::string diagnostic = "nearly-radial";
  std::string x, y;
  std::string radii = "[0.1, 0.01, 0.001]";
  std::string eps_grid = "[0.2, 0.1, 0.05]";
  std::size_t samples = 400;
  double threshold = 0.05;
  double eps = 0.1;
};

std::string cone_text(const geom::Cone& k) {
  std::ostringstream os;
  os << k.kind_name();
  if (const auto* h = k.get_if<geom::ConeHalfspaces>()) {
    for (Eigen::Index r = 0; r < h->A.rows(); ++r) {
      os << " [";
      for (Eigen::Index j = 0; j < h->A.cols(); ++j) os << (j ? " " : "") << num(h->A(r, j));
      os << "]d<=0";
    }
  }
  if (const auto* s = k.get_if<geom::ConeSubspace>()) os << " dim " << s->basis.cols();
  if (const auto* u = k.get_if<geom::ConeUnion>()) os << " of " << u->members.size();
  return os.str();
}

report::Table run_sets(const SetsArgs& a, const Common& c) {
  if (a.fixture.empty()) throw ConfigError("--fixture is required");
  const Fixture f = load_fixture(a.fixture, parse_params(a.params));
  const Vec x = a.x.empty() ? f.reference_point : report::parse_vector(a.x);
  const Exec exec = exec_from(c);
  geom::ShellConfig sc;
  sc.radii = parse_grid(a.radii, "--radii");
  sc.samples_per_shell = a.samples;
  sc.seed = c.seed;
  sc.threshold = a.threshold;
  report::Table t;
  auto shells = [&](const geom::GeometryReport& rep) {
    t.header = {"kind", "scale", "ratio", "samples"};
    for (const auto& s : rep.shells) t.add_row({"shell", num(s.radius), num(s.max_ratio), std::to_string(s.samples)});
    for (const auto& w : rep.witnesses) t.add_row({"witness", num((w.x - w.y).norm()), num(w.ratio), "1"});
    t.add_meta("verdict", rep.pass ? "PASS" : "FAIL");
  };
  if (a.diagnostic == "nearly-radial") {
    shells(geom::nearly_radial_profile(f.domain, x, sc, f.witness_points));
  } else if (a.diagnostic == "nearly-convex") {
    shells(geom::nearly_convex_profile(f.domain, x, sc, f.witness_pairs));
  } else if (a.diagnostic == "prox-regular") {
    shells(geom::prox_regular_profile(f.domain, x, sc, f.witness_pairs));
  } else if (a.diagnostic == "peaceful") {
    geom::SetmapConfig cfg;
    cfg.seed = c.seed;
    const geom::PeacefulProfile p =
        geom::peaceful_profile(f.domain, x, parse_grid(a.eps_grid, "--eps-grid"), cfg, a.threshold, exec);
    t.header = {"epsilon", "setmap_lip", "pairs", "min_cloud"};
    for (const auto& r : p.rows) t.add_row({num(r.eps), num(r.value), std::to_string(r.pairs), std::to_string(r.min_cloud)});
    t.add_meta("verdict", p.one_peaceful ? "PASS" : "FAIL");
  } else if (a.diagnostic == "tangent-cone") {
    const geom::Cone T = geom::tangent_cone(f.domain, x);
    t.header = {"point", "cone"};
    std::string pt;
    for (Eigen::Index i = 0; i < x.size(); ++i) pt += (i ? " " : "") + num(x[i]);
    t.add_row({pt, cone_text(T)});
  } else if (a.diagnostic == "normal-bound") {
    if (a.y.empty()) throw ConfigError("normal-bound needs --y (the point of X)");
    const geom::NormalBound b = geom::normal_cone_lip_bound(f.domain, x, report::parse_vector(a.y));
    t.header = {"bound", "infinite"};
    t.add_row({num(b.value), b.infinite ? "1" : "0"});
  } else if (a.diagnostic == "sample") {
    const geom::PointCloud cloud = geom::sample_ball_intersection(f.domain, x, a.eps, a.samples, c.seed);
    t.header.clear();
    for (int i = 0; i < f.domain.dimension(); ++i) t.header.push_back("x" + std::to_string(i + 1));
    for (const Vec& p : cloud.points) {
      std::vector<std::string> row;
      for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(num(p[i]));
      t.add_row(std::move(row));
    }
  } else {
    throw ConfigError("--diagnostic must be nearly-radial, nearly-convex, prox-regular, peaceful, tangent-cone, "
                      "normal-bound or sample");
  }
  return t;
}

std::string ids_help() {
  std::string s = "Experiment id, one of:";
  for (const auto& id : reproduce_ids()) s += "\n  " + id;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robreg: robust regularization, moduli, LMI certificates, pseudospectra and set geometry"};
  app.set_version_flag("--version", std::string(ROBREG_VERSION));
  app.set_config("--config", "", "TOML config file; sections name subcommands, flags override");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--exec", common.exec, "serial or parallel")->capture_default_str();
  app.add_option("--out", common.out, "Write the CSV here instead of stdout");

  ModelArgs reg_m, prof_m, mod_m;
  double reg_eps = 0.0;
  auto* reg = app.add_subcommand("regularize", "Robust value fbar_eps(x)");
  add_model_options(reg, reg_m);
  reg->add_option("--eps", reg_eps, "Radius")->required();

  std::string prof_grid;
  bool prof_derivative = false;
  auto* prof = app.add_subcommand("profile", "The profile eps -> fbar_eps(x) on a grid");
  add_model_options(prof, prof_m);
  prof->add_option("--eps-grid", prof_grid, "Increasing radii as a JSON array")->required();
  prof->add_flag("--derivative", prof_derivative, "Also estimate calm fbar_eps(x) from the profile");

  ModuliArgs mod_a;
  auto* mod = app.add_subcommand("moduli", "Calmness and Lipschitz moduli estimates");
  add_model_options(mod, mod_m);
  mod->add_option("--kind", mod_a.kind, "calm, lip, both, limsup, profile or agreement")->capture_default_str();
  mod->add_option("--radii", mod_a.radii, "Decreasing shell radii (JSON)")->capture_default_str();
  mod->add_option("--per-radius", mod_a.per_radius, "Samples per shell")->capture_default_str();
  mod->add_option("--regularized", mod_a.regularized, "Estimate moduli of fbar_eps for this eps instead of f");
  mod->add_option("--eps-grid", mod_a.eps_grid, "Radii for --kind agreement")->capture_default_str();
  mod->add_option("--eps", mod_a.eps, "Radius for --kind profile");
  mod->add_option("--tolerance", mod_a.tolerance, "Agreement gap tolerance")->capture_default_str();

  SdpArgs sdp_a;
  auto* sdp = app.add_subcommand("sdp-check", "LMI value by bisection against the closed-form oracle");
  sdp->add_option("--A", sdp_a.A, "Norm case: A as a JSON matrix");
  sdp->add_option("--A-file", sdp_a.A_file, "Norm case: A from a Matrix Market file");
  sdp->add_option("--b", sdp_a.b, "Norm case: b (default 0)");
  sdp->add_option("--H", sdp_a.H, "Quadratic case: H (positive definite)");
  sdp->add_option("--c", sdp_a.c, "Quadratic case: c (default 0)");
  sdp->add_option("--d", sdp_a.d, "Quadratic case: d")->capture_default_str();
  sdp->add_option("--x", sdp_a.x, "Base point")->required();
  sdp->add_option("--eps", sdp_a.eps, "Radius")->required();
  sdp->add_option("--tol", sdp_a.tol, "Bisection width")->capture_default_str();
  sdp->add_option("--sdpa", sdp_a.sdpa, "Also write the SDPA sparse (.dat-s) problem here");

  PseudoArgs ps_a;
  auto* ps = app.add_subcommand("pseudospectrum", "Pseudospectral abscissa or radius");
  ps->add_option("--matrix", ps_a.matrix, "JSON matrix; complex entries as [re, im]");
  ps->add_option("--matrix-file", ps_a.matrix_file, "Matrix Market file");
  ps->add_option("--fixture", ps_a.fixture, "Matrix fixture (jordan2)");
  ps->add_option("--eps-grid", ps_a.eps_grid, "Radii (JSON)")->capture_default_str();
  ps->add_option("--quantity", ps_a.quantity, "abscissa or radius")->capture_default_str();
  ps->add_option("--resolution", ps_a.resolution, "Grid points per axis (>= 32)")->capture_default_str();

  SetsArgs sets_a;
  auto* sets = app.add_subcommand("sets", "Set geometry diagnostics on set fixtures");
  sets->add_option("--fixture", sets_a.fixture, "Fixture providing the domain")->required();
  sets->add_option("--param", sets_a.params, "Fixture parameter key=value (repeatable)");
  sets->add_option("--diagnostic", sets_a.diagnostic,
                   "nearly-radial, nearly-convex, prox-regular, peaceful, tangent-cone, normal-bound or sample")
      ->capture_default_str();
  sets->add_option("--x", sets_a.x, "Point (default: fixture reference point)");
  sets->add_option("--y", sets_a.y, "Point of X for normal-bound");
  sets->add_option("--radii", sets_a.radii, "Decreasing shell radii (JSON)")->capture_default_str();
  sets->add_option("--eps-grid", sets_a.eps_grid, "Radii for peaceful (JSON)")->capture_default_str();
  sets->add_option("--samples", sets_a.samples, "Samples per shell or cloud")->capture_default_str();
  sets->add_option("--threshold", sets_a.threshold, "Verdict threshold")->capture_default_str();
  sets->add_option("--eps", sets_a.eps, "Ball radius for sample")->capture_default_str();

  std::string rep_id;
  std::optional<double> rep_eps;
  auto* rep = app.add_subcommand("reproduce", "Run a frozen experiment; exit 1 when it misses its threshold");
  rep->add_option("id", rep_id, ids_help())->required();
  rep->add_option("--eps", rep_eps, "Radius (intro1d-minimizer only)");

  auto* fixtures = app.add_subcommand("fixtures", "List fixture names");

  for (CLI::App* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (common.threads < 0) throw ConfigError("--threads must be >= 0");
    set_thread_count(common.threads);
    const Exec exec = exec_from(common);
    set_default_exec(exec);
    report::Table table;
    const CLI::App* used = app.get_subcommands().front();
    int code = 0;
    if (used == fixtures) {
      for (const auto& n : fixture_names()) std::cout << n << '\n';
      return 0;
    } else if (used == reg) {
      table = run_regularize(reg_m, reg_eps, common);
    } else if (used == prof) {
      table = run_profile(prof_m, prof_grid, prof_derivative, common);
    } else if (used == mod) {
      table = run_moduli(mod_m, mod_a, common);
    } else if (used == sdp) {
      table = run_sdp(sdp_a);
    } else if (used == ps) {
      table = run_pseudo(ps_a, common);
    } else if (used == sets) {
      table = run_sets(sets_a, common);
    } else {
      ExperimentResult r = reproduce(rep_id, {common.seed, rep_eps, exec});
      emit(report::to_csv(r.table), common);
      std::cerr << rep_id << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.summary << ")\n";
      return r.pass ? 0 : kThresholdFailure;
    }
    stamp(table, app, *used);
    emit(report::to_csv(table), common);
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const robreg::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return kComputationError;
  }
}
