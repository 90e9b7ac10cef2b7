#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "robreg/lmi.hpp"
#include "robreg/sdpa.hpp"

using namespace robreg;

namespace {
lmi::NormInstance norm_instance(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  lmi::NormInstance inst;
  inst.A = Mat(3, 2);
  inst.b = Vec(3);
  inst.x = Vec(2);
  for (double& v : inst.A.reshaped()) v = u(g);
  for (double& v : inst.b) v = u(g);
  for (double& v : inst.x) v = u(g);
  inst.eps = 0.6;
  return inst;
}

lmi::QuadInstance quad_instance() {
  lmi::QuadInstance q;
  q.H = Mat(2, 2);
  q.H << 3, 1, 1, 2;
  q.c = Vec(2);
  q.c << 0.5, -1;
  q.d = 0.25;
  q.x = Vec(2);
  q.x << 1, 1;
  q.eps = 0.3;
  return q;
}
}  // namespace

TEST_CASE("norm LMI structure") {
  const lmi::NormInstance inst = norm_instance(1);
  const lmi::BlockSymMatrix M = lmi::build_norm_lmi(inst, 2.0, 0.5);
  CHECK(M.M.rows() == 3 + 1 + 2);
  CHECK(M.symmetry_defect() == 0.0);
  CHECK(M.M(3, 3) == 1.5);
  CHECK(M.blocks.size() == 5);
}

TEST_CASE("lambda_min is concave along mu") {
  const lmi::NormInstance inst = norm_instance(2);
  for (double t : {1.0, 3.0, 6.0}) {
    for (double a = 0.0; a < 5.0; a += 0.7) {
      const double b = a + 1.3;
      const double mid = lmi::build_norm_lmi(inst, t, 0.5 * (a + b)).min_eigenvalue();
      const double avg = 0.5 * (lmi::build_norm_lmi(inst, t, a).min_eigenvalue() +
                                lmi::build_norm_lmi(inst, t, b).min_eigenvalue());
      CHECK(mid >= avg - 1e-12);
    }
  }
}

TEST_CASE("norm feasibility is monotone in t and brackets the oracle") {
  const lmi::NormInstance inst = norm_instance(3);
  const double ref = oracle::affine_norm_ball_max(inst.A, inst.b, inst.x, inst.eps);
  CHECK(lmi::feasible_norm(inst, ref + 1e-6).feasible);
  CHECK_FALSE(lmi::feasible_norm(inst, ref - 1e-4).feasible);
  bool seen_feasible = false;
  for (double t = 0.0; t < 2.0 * ref; t += ref / 20.0) {
    const bool f = lmi::feasible_norm(inst, t).feasible;
    CHECK(!(seen_feasible && !f));
    seen_feasible = seen_feasible || f;
  }
  const lmi::LmiValue v = lmi::robust_value_via_norm_lmi(inst);
  CHECK(v.value == doctest::Approx(ref).epsilon(1e-8));
  CHECK(v.hi - v.lo <= 1e-10);
}

TEST_CASE("quadratic LMI matches the oracle and rejects non-PD H") {
  const lmi::QuadInstance q = quad_instance();
  const double ref = oracle::quadratic_ball_max(q.H, q.c, q.d, q.x, q.eps);
  CHECK(lmi::robust_value_via_quad_lmi(q).value == doctest::Approx(ref).epsilon(1e-8));
  const lmi::QuadFactors f = lmi::quad_factors(q.H, q.c);
  CHECK((f.sqrtH * f.sqrtH - q.H).norm() <= 1e-12);
  CHECK((f.sqrtH * f.inv_sqrtH - Mat::Identity(2, 2)).norm() <= 1e-12);
  lmi::QuadInstance bad = q;
  bad.H(1, 1) = -1.0;
  CHECK_THROWS_AS(lmi::robust_value_via_quad_lmi(bad), DomainError);
  bad = q;
  bad.H(0, 1) = 0.0;
  CHECK_THROWS_AS(lmi::quad_factors(bad.H, bad.c), DomainError);
  const lmi::QuadLmi m = lmi::build_quad_lmi(q, ref, 1.0, 0.5);
  CHECK(m.residual == doctest::Approx(ref - 1.0 + f.c_Hinv_c - q.d));
}

TEST_CASE("instance validation") {
  lmi::NormInstance inst = norm_instance(4);
  inst.eps = 0.0;
  CHECK_THROWS_AS(lmi::robust_value_via_norm_lmi(inst), ConfigError);
  inst = norm_instance(4);
  inst.x = Vec::Zero(5);
  CHECK_THROWS_AS(lmi::feasible_norm(inst, 1.0), DimensionError);
}

TEST_CASE("SDPA export round-trips exactly") {
  const lmi::NormInstance inst = norm_instance(5);
  const sdpa::Problem p = sdpa::from_norm(inst);
  std::ostringstream os;
  Vec y(2);
  y << 2.5, 0.75;
  sdpa::write(os, p, y);
  std::istringstream is(os.str());
  const sdpa::Problem r = sdpa::read(is);
  REQUIRE(r.variables() == 2);
  CHECK(r.block_sizes == p.block_sizes);
  CHECK(r.objective == p.objective);
  for (std::size_t k = 0; k < p.F.size(); ++k) {
    for (std::size_t b = 0; b < p.F[k].size(); ++b) CHECK(r.F[k][b] == p.F[k][b]);
  }
  // The affine family reproduces the builder.
  CHECK((sdpa::evaluate_block(p, y, 0) - lmi::build_norm_lmi(inst, 2.5, 0.75).M).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("quadratic SDPA blocks") {
  const lmi::QuadInstance q = quad_instance();
  const sdpa::Problem p = sdpa::from_quad(q);
  REQUIRE(p.variables() == 3);
  REQUIRE(p.block_sizes.size() == 2);
  Vec y(3);
  y << 4.0, 1.5, 0.3;
  CHECK((sdpa::evaluate_block(p, y, 0) - lmi::build_quad_lmi(q, 4.0, 1.5, 0.3).block.M).cwiseAbs().maxCoeff() <=
        1e-14);
  // det of the 2x2 block is the side-constraint residual.
  const Mat S = sdpa::evaluate_block(p, y, 1);
  CHECK(S.determinant() == doctest::Approx(lmi::build_quad_lmi(q, 4.0, 1.5, 0.3).residual).epsilon(1e-12));
}

TEST_CASE("SDPA reader rejects malformed input") {
  std::istringstream truncated("2\n1\n3\n1.0\n");
  CHECK_THROWS_AS(sdpa::read(truncated), ConfigError);
  std::istringstream bad_index("1\n1\n2\n1.0\n0 1 3 1 1.0\n");
  CHECK_THROWS_AS(sdpa::read(bad_index), ConfigError);
}
