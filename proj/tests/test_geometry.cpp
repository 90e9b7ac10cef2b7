#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "robreg/cones.hpp"
#include "robreg/fixtures.hpp"
#include "robreg/geometry.hpp"
#include "robreg/setmap.hpp"

using namespace robreg;
using namespace robreg::geom;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

PointCloud random_cloud(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd;
  PointCloud c;
  for (int i = 0; i < n; ++i) c.points.push_back(v2(nd(g), nd(g)));
  return c;
}
}  // namespace

TEST_CASE("Hausdorff distance is a metric on clouds") {
  std::mt19937_64 g(3);
  for (int t = 0; t < 100; ++t) {
    const PointCloud a = random_cloud(g, 20), b = random_cloud(g, 15), c = random_cloud(g, 25);
    const double ab = hausdorff_distance(a, b), ba = hausdorff_distance(b, a);
    CHECK(ab == ba);
    CHECK(ab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12);
  }
  PointCloud a = random_cloud(g, 10);
  PointCloud b = a;
  std::reverse(b.points.begin(), b.points.end());
  b.points.push_back(a.points[3]);
  CHECK(hausdorff_distance(a, b) == 0.0);
  b.points.push_back(v2(100, 0));
  CHECK(hausdorff_distance(a, b) > 0.0);
  CHECK_THROWS_AS(hausdorff_distance(a, PointCloud{}), ConfigError);
}

TEST_CASE("directed distances") {
  PointCloud a, b;
  a.points = {v2(0, 0)};
  b.points = {v2(0, 0), v2(3, 4)};
  CHECK(directed_distance(a, b) == 0.0);
  CHECK(directed_distance(b, a) == 5.0);
  CHECK(hausdorff_distance(a, b, Exec::Serial) == hausdorff_distance(a, b, Exec::Parallel));
}

TEST_CASE("exact cone projection against the iterative reference") {
  std::mt19937_64 g(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 3, k = 1 + t % 5;
    Mat R(n, k);
    for (double& x : R.reshaped()) x = nd(g);
    Vec v(n);
    for (double& x : v) x = nd(g);
    const Cone C = Cone::generators(R);
    CHECK((C.project(v) - project_generators_iterative(R, v)).norm() <= 1e-6);
    // Moreau: v = P_C v + P_polar v.
    CHECK((C.project(v) + C.polar().project(v) - v).norm() <= 1e-10);
  }
}

TEST_CASE("cone kinds") {
  CHECK(Cone::full(3).polar().distance(Vec::Ones(3)) == doctest::Approx(std::sqrt(3.0)));
  const Cone line = Cone::subspace(v2(1, 1));
  CHECK(line.distance(v2(1, -1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(line.polar().contains(v2(1, -1)));
  Mat A(1, 2);
  A << 0, 1;
  const Cone half = Cone::halfspaces(A);
  CHECK(half.contains(v2(5, -1)));
  CHECK(half.distance(v2(0, 2)) == 2.0);
  const Cone u = Cone::union_of({Cone::subspace(v2(1, 0)), Cone::subspace(v2(0, 1))});
  CHECK(u.distance(v2(1, 2)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(u.polar(), Error);
  Mat big(3, 13);
  big.setOnes();
  CHECK_THROWS_AS(Cone::halfspaces(big.transpose()).project(Vec::Ones(3)), ConfigError);
}

TEST_CASE("tangent cones") {
  const DomainModel box = DomainModel::box(Vec::Zero(2), Vec::Ones(2));
  const Cone corner = tangent_cone(box, Vec::Zero(2));
  CHECK(corner.contains(v2(1, 2)));
  CHECK_FALSE(corner.contains(v2(-1, 2)));
  CHECK(tangent_cone(box, v2(0.5, 0.5)).contains(v2(-1, -1)));
  const DomainModel ball = DomainModel::ball(Vec::Zero(2), 1.0);
  const Cone tb = tangent_cone(ball, v2(1, 0));
  CHECK(tb.contains(v2(-0.1, 5)));
  CHECK_FALSE(tb.contains(v2(0.1, 5)));
  const Fixture circle = load_fixture("circle");
  const Cone tc = tangent_cone(circle.domain, v2(1, 0));
  CHECK(tc.contains(v2(0, 3)));
  CHECK(tc.distance(v2(1, 0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tangent_cone(box, v2(2, 2)), DomainError);
  const Fixture axes = load_fixture("crossed_axes");
  CHECK(tangent_cone(axes.domain, Vec::Zero(2)).contains(v2(0, -3)));
  CHECK(tangent_ratio(axes.domain, v2(0.5, 0), Vec::Zero(2)) == 0.0);
}

TEST_CASE("normal cone bound on the lower half-plane") {
  const Fixture f = load_fixture("lower_halfplane");
  CHECK(normal_cone_lip_bound(f.domain, v2(1, 0), Vec::Zero(2)).value == doctest::Approx(1.0));
  CHECK(normal_cone_lip_bound(f.domain, v2(1, 1), Vec::Zero(2)).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(normal_cone_lip_bound(f.domain, v2(0, 1), Vec::Zero(2)).infinite);
}

TEST_CASE("ball intersection clouds") {
  const DomainModel square = DomainModel::box(Vec::Zero(2), Vec::Ones(2));
  const PointCloud c = sample_ball_intersection(square, Vec::Zero(2), 0.3, 200, 9);
  CHECK(c.size() > 20);
  for (const Vec& p : c.points) {
    CHECK(square.contains(p));
    CHECK(p.norm() <= 0.3 + 1e-12);
  }
  const Fixture circle = load_fixture("circle");
  for (const Vec& p : sample_ball_intersection(circle.domain, v2(1, 0), 0.2, 100, 1).points) {
    CHECK(std::abs(p.norm() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(sample_ball_intersection(square, v2(5, 5), 0.1, 50, 1), NumericalError);
}

TEST_CASE("matched seeds make the full-space map exactly 1-Lipschitz") {
  const SetmapEstimate e = setmap_lip_estimate(DomainModel::full_space(2), Vec::Zero(2), 0.1, {});
  CHECK(e.value >= 0.98);
  CHECK(e.value <= 1.02);
}

TEST_CASE("nearly radial: union of radial members stays radial") {
  const Fixture axes = load_fixture("crossed_axes");
  ShellConfig cfg;
  cfg.samples_per_shell = 200;
  const auto& members = axes.domain.get_if<UnionDomain>()->members;
  for (const DomainModel& m : members) CHECK(nearly_radial_profile(m, Vec::Zero(2), cfg).pass);
  CHECK(nearly_radial_profile(axes.domain, Vec::Zero(2), cfg).pass);
  CHECK_FALSE(nearly_convex_profile(axes.domain, Vec::Zero(2), cfg, axes.witness_pairs).pass);
}

TEST_CASE("convex and smooth sets are nearly convex and prox-regular") {
  ShellConfig cfg;
  cfg.samples_per_shell = 200;
  const Fixture sq = load_fixture("unit_square");
  CHECK(nearly_convex_profile(sq.domain, sq.reference_point, cfg).pass);
  const Fixture circle = load_fixture("circle");
  cfg.threshold = 1.0;  // the ratio tends to 1 / (2 r)
  const GeometryReport pr = prox_regular_profile(circle.domain, circle.reference_point, cfg);
  CHECK(pr.pass);
  CHECK(pr.shells.back().max_ratio <= 0.5 + 1e-3);
}

TEST_CASE("dyadic epigraph is not nearly radial") {
  const Fixture f = load_fixture("epi_dyadic");
  ShellConfig cfg;
  cfg.radii = {0.5, 0.125, 0.03125};
  const GeometryReport r = nearly_radial_profile(f.domain, f.reference_point, cfg, f.witness_points);
  CHECK_FALSE(r.pass);
  for (const auto& w : r.witnesses) CHECK(w.ratio == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-9));
}

TEST_CASE("Lipschitz upper bound for regularized functions") {
  LipBoundConfig cfg;
  cfg.pairs_per_radius = 500;
  cfg.search.samples = 256;
  cfg.search.refine_starts = 2;
  const Fixture lin = load_fixture("affine2");
  const LipBoundReport a = lip_upper_bound_check(*lin.model, lin.domain, lin.reference_point, {0.1}, cfg);
  CHECK(a.pass);
  CHECK(a.rows[0].lip_fbar == doctest::Approx(a.rows[0].bound).epsilon(0.02));
  const Fixture c = load_fixture("constant");
  const LipBoundReport b = lip_upper_bound_check(*c.model, c.domain, c.reference_point, {0.1}, cfg);
  CHECK(b.rows[0].lip_fbar == 0.0);
}
