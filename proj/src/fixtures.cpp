#include "robreg/fixtures.hpp"

#include <cmath>
#include <cstdio>

namespace robreg {

namespace {

double param(const FixtureParams& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  return v < 0 ? "(" + s + ")" : s;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Fixture make(std::string name, std::string description, std::optional<FunctionModel> model, DomainModel domain,
             Vec ref) {
  Fixture f{std::move(name), std::move(description), std::move(model), std::move(domain), std::move(ref),
            std::nullopt, {}, std::nullopt, {}, {}};
  if (f.model) f.reference_value = f.model->eval(f.reference_point);
  return f;
}

Fixture intro1d() {
  auto model = FunctionModel::piecewise1d(
      {0.0}, {expr::Expression::parse("-x1", 1), expr::Expression::parse("sqrt(x1)", 1)});
  Fixture f = make("intro1d", "f(x) = -x for x < 0, sqrt(x) for x >= 0", std::move(model),
                   DomainModel::full_space(1), Vec::Zero(1));
  f.closed_forms["alpha"] = intro_alpha;
  // Regularized value at the base point 0: sqrt(eps).
  f.closed_forms["profile"] = [](double eps) { return std::sqrt(eps); };
  return f;
}

Fixture root_k(const FixtureParams& params) {
  const double kd = param(params, "k", 2.0);
  if (kd < 1.0 || kd != std::floor(kd)) throw ConfigError("root_k: k must be a positive integer");
  const int k = static_cast<int>(kd);
  Piece1D root = k == 2 ? Piece1D(expr::Expression::parse("sqrt(x1)", 1))
                        : Piece1D([k](double x) { return std::pow(x, 1.0 / k); }, "x1^(1/" + std::to_string(k) + ")");
  // Outside [0, 1] the domain clips; the outer pieces are never evaluated there.
  auto model = FunctionModel::piecewise1d(
      {0.0}, {Piece1D([](double) -> double { throw DomainError("root_k: x < 0 is outside [0, 1]"); }, "undefined"),
              std::move(root)});
  Fixture f = make("root_k", "f(x) = x^(1/k) on [0, 1], k = " + std::to_string(k), std::move(model),
                   DomainModel::box(Vec::Zero(1), Vec::Ones(1)), Vec::Zero(1));
  f.closed_forms["profile"] = [k](double eps) { return std::pow(std::min(eps, 1.0), 1.0 / k); };
  f.closed_forms["profile_derivative"] = [k](double eps) { return std::pow(eps, 1.0 / k - 1.0) / k; };
  return f;
}

// Regions: x1 <= 0; 0 <= x1 <= x2/2; 0 <= x1 <= -x2/2; x1 >= |x2|/2.
Fixture example24b(bool literal) {
  const char* text = literal ? "piecewise{ x1 <= 0 : 0 ; 2*x1 <= x2 : x1 ; 2*x1 <= -x2 : -x1 ; x1 >= 0 : 2*x2 ; }"
                             : "piecewise{ x1 <= 0 : 0 ; 2*x1 <= x2 : 2*x1 ; 2*x1 <= -x2 : -2*x1 ; x1 >= 0 : x2 ; }";
  Fixture f = make(literal ? "example24b_literal" : "example24b",
                   literal ? "four-branch planar function with the branch values as printed (discontinuous)"
                           : "continuous four-branch planar function: calm(0,0) = 2/sqrt(5), lip(0,0) = 2",
                   FunctionModel::expression(text, 2), DomainModel::full_space(2), Vec::Zero(2));
  return f;
}

Fixture sqrt_abs_2d() {
  Fixture f = make("sqrt_abs_2d", "f(x1, x2) = sqrt(|x1|)", FunctionModel::expression("sqrt(abs(x1))", 2),
                   DomainModel::full_space(2), Vec::Zero(2));
  f.closed_forms["profile"] = [](double eps) { return std::sqrt(eps); };
  return f;
}

Fixture quad(const FixtureParams& params) {
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = param(params, "h1", 4.0);
  H(1, 1) = param(params, "h2", 1.0);
  H(0, 1) = H(1, 0) = param(params, "h12", 0.0);
  const Vec c = vec2(param(params, "c1", 0.0), param(params, "c2", 0.0));
  const double d = param(params, "d", 0.0);
  return make("quad", "x^T H x + 2 c^T x + d", FunctionModel::quadratic(H, c, d), DomainModel::full_space(2),
              vec2(param(params, "x1", 1.0), param(params, "x2", 0.0)));
}

Fixture affnorm(const FixtureParams& params) {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = param(params, "a1", 2.0);
  A(1, 1) = param(params, "a2", 1.0);
  const Vec b = vec2(param(params, "b1", 0.0), param(params, "b2", 0.0));
  return make("affnorm", "||A x + b||_2", FunctionModel::affine_norm(A, b), DomainModel::full_space(2),
              vec2(param(params, "x1", 1.0), param(params, "x2", 0.0)));
}

Fixture jordan2() {
  Mat J = Mat::Zero(2, 2);
  J(0, 1) = 1.0;
  Fixture f = make("jordan2", "spectral abscissa at the 2x2 nilpotent Jordan block", FunctionModel::spectral_abscissa(2),
                   DomainModel::full_space(4), flatten_row_major(J));
  f.matrix = J;
  f.closed_forms["profile"] = [](double eps) { return std::sqrt(eps * (1.0 + eps)); };
  f.closed_forms["profile_derivative"] = [](double eps) {
    return (1.0 + 2.0 * eps) / (2.0 * std::sqrt(eps + eps * eps));
  };
  return f;
}

Fixture crossed_axes() {
  Fixture f = make("crossed_axes", "X = {x in R^2 : x1 x2 = 0}",
                   std::nullopt,
                   DomainModel::union_of({DomainModel::affine_set(Vec::Zero(2), vec2(1.0, 0.0)),
                                          DomainModel::affine_set(Vec::Zero(2), vec2(0.0, 1.0))}),
                   Vec::Zero(2));
  for (int n = 2; n <= 1024; n *= 2) {
    f.witness_pairs.emplace_back(vec2(1.0 / n, 0.0), vec2(0.0, 1.0 / n));
  }
  return f;
}

Fixture epi_dyadic(const FixtureParams& params) {
  const double depth = param(params, "depth", 12.0);
  if (depth < 3 || depth > 60 || depth != std::floor(depth)) throw ConfigError("epi_dyadic: depth must be an integer in [3, 60]");
  const int D = static_cast<int>(depth);
  Fixture f = make("epi_dyadic", "epigraph of the dyadic concave-segment function, truncated at depth " + std::to_string(D),
                   std::nullopt, DomainModel::dyadic_epigraph(D), Vec::Zero(2));
  // Probed scales stay >= 2^-(D-2).
  for (int n = 1; n <= D - 2; ++n) {
    const double s = std::ldexp(1.0, -n);
    f.witness_points.push_back(vec2(s, s));
  }
  return f;
}

Fixture unit_square() {
  return make("unit_square", "[0, 1]^2", std::nullopt, DomainModel::box(Vec::Zero(2), Vec::Ones(2)), vec2(0.5, 0.5));
}

Fixture simplex2() {
  Mat A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  Vec b(3);
  b << 0, 0, 1;
  return make("simplex2", "{x >= 0, x1 + x2 <= 1}", std::nullopt, DomainModel::polytope(A, b), Vec::Zero(2));
}

Fixture lower_halfplane() {
  Mat A(1, 2);
  A << 0, 1;
  return make("lower_halfplane", "{x2 <= 0}", std::nullopt, DomainModel::polytope(A, Vec::Zero(1)), Vec::Zero(2));
}

Fixture circle(const FixtureParams& params) {
  const double r = param(params, "r", 1.0);
  if (!(r > 0)) throw ConfigError("circle: radius must be positive");
  std::vector<expr::Expression> h{expr::Expression::parse("x1^2 + x2^2 - " + num(r * r), 2)};
  return make("circle", "circle of radius r in R^2", std::nullopt, DomainModel::smooth_equality(std::move(h)),
              vec2(r, 0.0));
}

Fixture linear(const FixtureParams& params) {
  const double a = param(params, "a", 3.0);
  return make("linear", "f(x) = a x", FunctionModel::expression(num(a) + "*x1", 1), DomainModel::full_space(1),
              Vec::Zero(1));
}

Fixture affine2(const FixtureParams& params) {
  const double a1 = param(params, "a1", 2.0), a2 = param(params, "a2", -1.0), b = param(params, "b", 0.5);
  return make("affine2", "f(x) = a1 x1 + a2 x2 + b",
              FunctionModel::expression(num(a1) + "*x1 + " + num(a2) + "*x2 + " + num(b), 2),
              DomainModel::full_space(2), Vec::Zero(2));
}

Fixture constant(const FixtureParams& params) {
  const double c = param(params, "value", 2.0);
  const int n = static_cast<int>(param(params, "n", 1.0));
  return make("constant", "f(x) = c", FunctionModel::expression(num(c), n), DomainModel::full_space(n), Vec::Zero(n));
}

Fixture x2sin() {
  auto f = FunctionModel::black_box(
      [](const Vec& x) { return x[0] == 0.0 ? 0.0 : x[0] * x[0] * std::sin(1.0 / (x[0] * x[0])); }, 1,
      "x^2 sin(1/x^2)");
  return make("x2sin", "f(x) = x^2 sin(1/x^2), f(0) = 0: calm 0, lip infinite at 0", std::move(f),
              DomainModel::full_space(1), Vec::Zero(1));
}

Fixture max_affine(const FixtureParams& params) {
  const double a1 = param(params, "a1", 1.0), b1 = param(params, "b1", 0.0);
  const double a2 = param(params, "a2", 3.0), b2 = param(params, "b2", -1.0);
  const std::string text = "max(" + num(a1) + "*x1 + " + num(b1) + ", " + num(a2) + "*x1 + " + num(b2) + ")";
  return make("max_affine", "max of two affine functions in 1-D", FunctionModel::expression(text, 1),
              DomainModel::full_space(1), Vec::Zero(1));
}

Fixture triadic(const FixtureParams& params) {
  const double depth = param(params, "depth", 10.0);
  if (depth < 1 || depth > 30) throw ConfigError("triadic: depth must be in [1, 30]");
  const int D = static_cast<int>(depth);
  std::vector<DomainModel> members{DomainModel::box(Vec::Zero(1), Vec::Zero(1))};
  for (int i = 1; i <= D; ++i) {
    const double s = std::pow(3.0, -i);
    members.push_back(DomainModel::box(Vec::Constant(1, s), Vec::Constant(1, 2.0 * s)));
  }
  auto f = FunctionModel::black_box(
      [D](const Vec& x) {
        for (int i = 1; i <= D; ++i) {
          const double s = std::pow(3.0, -i);
          if (x[0] >= s - 1e-15 && x[0] <= 2.0 * s + 1e-15) return s;
        }
        return 0.0;
      },
      1, "triadic step");
  return make("triadic", "F = 3^-i on [3^-i, 2 3^-i]: calm 0 off the origin, lip 2 at 0 (depth-truncated)",
              std::move(f), DomainModel::union_of(std::move(members)), Vec::Zero(1));
}

}  // namespace

double intro_alpha(double eps) { return (1.0 + 2.0 * eps - std::sqrt(1.0 + 8.0 * eps)) / 2.0; }

std::vector<std::string> fixture_names() {
  return {"intro1d",    "root_k",      "example24b", "example24b_literal", "sqrt_abs_2d",     "quad",
          "affnorm",    "jordan2",     "crossed_axes", "epi_dyadic",       "unit_square",     "simplex2",
          "lower_halfplane", "circle", "linear",     "affine2",            "constant",        "x2sin",
          "max_affine", "triadic"};
}

Fixture load_fixture(const std::string& name, const FixtureParams& params) {
  if (name == "intro1d") return intro1d();
  if (name == "root_k") return root_k(params);
  if (name == "example24b") return example24b(false);
  if (name == "example24b_literal") return example24b(true);
  if (name == "sqrt_abs_2d") return sqrt_abs_2d();
  if (name == "quad") return quad(params);
  if (name == "affnorm") return affnorm(params);
  if (name == "jordan2") return jordan2();
  if (name == "crossed_axes") return crossed_axes();
  if (name == "epi_dyadic") return epi_dyadic(params);
  if (name == "unit_square") return unit_square();
  if (name == "simplex2") return simplex2();
  if (name == "lower_halfplane") return lower_halfplane();
  if (name == "circle") return circle(params);
  if (name == "linear") return linear(params);
  if (name == "affine2") return affine2(params);
  if (name == "constant") return constant(params);
  if (name == "x2sin") return x2sin();
  if (name == "max_affine") return max_affine(params);
  if (name == "triadic") return triadic(params);
  throw ConfigError("unknown fixture '" + name + "'");
}

}  // namespace robreg
