#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "robreg/fixtures.hpp"
#include "robreg/regularize.hpp"

using namespace robreg;

namespace {
Vec randvec(std::mt19937_64& g, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec v(n);
  for (double& x : v) x = u(g);
  return v;
}

double intro_closed_form(double x, double eps) {
  double best = -INFINITY;
  if (x - eps < 0.0) best = std::max(best, eps - x);
  if (x + eps >= 0.0) best = std::max(best, std::sqrt(x + eps));
  return best;
}
}  // namespace

TEST_CASE("ball maximum of quadratics matches the eigenvalue oracle") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    Mat M(n, n);
    for (double& x : M.reshaped()) x = std::uniform_real_distribution<double>(-1, 1)(g);
    const Mat H = M.transpose() * M + (trial % 3 == 0 ? 0.0 : 0.05) * Mat::Identity(n, n);
    const Vec c = randvec(g, n), x = randvec(g, n);
    const double eps = 0.05 + 0.2 * (trial % 7);
    const BallQuadraticMax r = maximize_quadratic_on_ball(H, c, 0.3, x, eps);
    const double ref = oracle::quadratic_ball_max(H, c, 0.3, x, eps);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-9));
    CHECK((r.argmax - x).norm() <= eps * (1 + 1e-12));
    CHECK(r.argmax.dot(H * r.argmax) + 2 * c.dot(r.argmax) + 0.3 == doctest::Approx(r.value).epsilon(1e-12));
  }
}

TEST_CASE("hard case: gradient orthogonal to the top eigenvector") {
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = 2.0;
  H(1, 1) = 1.0;
  Vec c = Vec::Zero(2), x = Vec::Zero(2);
  x[1] = 0.01;  // gradient 2(Hx + c) along e2, top eigenvector e1
  const BallQuadraticMax r = maximize_quadratic_on_ball(H, c, 0.0, x, 1.0);
  // max over |y - x| <= 1 of 2 y1^2 + y2^2: y2 = 0.01 + s, y1^2 = 1 - s^2 with s = 0.01.
  const double s = 0.01;
  CHECK(r.value == doctest::Approx(2.0 * (1.0 - s * s) + std::pow(0.01 + s, 2)).epsilon(1e-9));
}

TEST_CASE("affine norm and quadratic robust values") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 1 + trial % 4, n = 1 + (trial / 4) % 4;
    Mat A(m, n);
    for (double& v : A.reshaped()) v = std::uniform_real_distribution<double>(-2, 2)(g);
    const Vec b = randvec(g, m), x = randvec(g, n);
    CHECK(robust_value_affine_norm(A, b, x, 0.4) ==
          doctest::Approx(oracle::affine_norm_ball_max(A, b, x, 0.4)).epsilon(1e-9));
  }
  Mat H = Mat::Identity(1, 1);
  Vec z = Vec::Zero(1), one = Vec::Ones(1);
  CHECK(robust_value_quadratic(H, z, 0.0, one, 0.5) == doctest::Approx(2.25));
  CHECK_THROWS_AS(robust_value_quadratic(-H, z, 0.0, one, 0.5), DomainError);
  CHECK(robust_value_affine_norm(H, z, one, 0.5) == doctest::Approx(1.5));
}

TEST_CASE("piecewise 1-D regularization of the intro function") {
  const Fixture f = load_fixture("intro1d");
  const auto* pw = f.model->get_if<Piecewise1DFn>();
  REQUIRE(pw != nullptr);
  for (double eps : {0.01, 0.1, 0.25, 1.0}) {
    for (double x = -1.5; x <= 1.5; x += 0.125) {
      CHECK(robust_value_piecewise1d(*pw, f.domain, x, eps) == doctest::Approx(intro_closed_form(x, eps)).epsilon(1e-12));
    }
  }
  const DomainModel box = DomainModel::box(Vec::Constant(1, -0.5), Vec::Constant(1, 2.0));
  // Clipped at -0.5: left branch peaks at 0.5.
  CHECK(robust_value_piecewise1d(*pw, box, -0.4, 1.0) == doctest::Approx(std::sqrt(0.6)));
}

TEST_CASE("intro minimizer closed form") {
  for (double eps : {0.01, 0.25, 1.0}) CHECK(intro_alpha(eps) == doctest::Approx(oracle::intro_alpha(eps)));
}

TEST_CASE("search is a lower bound and converges on sqrt|x1|") {
  const Fixture f = load_fixture("sqrt_abs_2d");
  SearchConfig cfg;
  cfg.samples = 512;
  for (double eps : {1e-3, 1e-1, 1.0}) {
    const SearchResult r = robust_value_search(*f.model, f.domain, f.reference_point, eps, cfg);
    CHECK(r.value <= std::sqrt(eps) * (1 + 1e-15));
    CHECK(r.value >= std::sqrt(eps) * (1 - 1e-8));
    CHECK(r.argmax.norm() <= eps * (1 + 1e-12));
  }
}

TEST_CASE("search respects the domain") {
  const FunctionModel f = FunctionModel::expression("x1 + x2", 2);
  const DomainModel square = DomainModel::box(Vec::Zero(2), Vec::Ones(2));
  Vec x(2);
  x << 0.9, 0.9;
  const SearchResult r = robust_value_search(f, square, x, 0.5, {});
  CHECK(square.contains(r.argmax));
  CHECK(r.value <= 2.0 + 2.0 * DomainModel::kMembershipTol);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("search is identical under serial and parallel execution") {
  const FunctionModel f = FunctionModel::expression("sqrt(abs(x1)) - x2^2 + max(x2, x1)", 2);
  const DomainModel X = DomainModel::full_space(2);
  Vec x(2);
  x << 0.1, -0.2;
  SearchConfig cfg;
  cfg.samples = 2000;
  const SearchResult a = robust_value_search(f, X, x, 0.3, cfg, Exec::Serial);
  const SearchResult b = robust_value_search(f, X, x, 0.3, cfg, Exec::Parallel);
  CHECK(a.value == b.value);
  CHECK(a.argmax == b.argmax);
}

TEST_CASE("evaluator dispatch and eps = 0") {
  const Fixture f = load_fixture("quad");
  const RobustEvaluator ev(*f.model, f.domain);
  CHECK(ev.method(f.reference_point, 0.1) == ValueMethod::Oracle);
  CHECK(ev.value(f.reference_point, 0.0) == (*f.model)(f.reference_point));
  const Fixture s = load_fixture("sqrt_abs_2d");
  const RobustEvaluator es(*s.model, s.domain);
  CHECK(es.method(s.reference_point, 0.1) == ValueMethod::Search);
}

TEST_CASE("profiles are monotone and radius grids are validated") {
  const Fixture f = load_fixture("intro1d");
  const RobustProfile p = epsilon_profile(*f.model, f.domain, f.reference_point, RadiusSpec::log_spaced(1e-3, 1.0, 13));
  CHECK(p.monotone());
  for (std::size_t i = 0; i < p.eps.size(); ++i) CHECK(p.values[i] == doctest::Approx(std::sqrt(p.eps[i])));
  CHECK_THROWS_AS(RadiusSpec({0.1, 0.1}), ConfigError);
  CHECK_THROWS_AS(RadiusSpec({-0.1}), ConfigError);
  CHECK_THROWS_AS(RadiusSpec({}), ConfigError);
}
