#include <cmath>

#include "doctest.h"
#include "robreg/fixtures.hpp"
#include "robreg/moduli.hpp"
#include "robreg/regularize.hpp"

using namespace robreg;

TEST_CASE("profile derivative of smooth profiles") {
  const ProfileFn g = [](double e) { return e * e * e; };
  const OneSided d = one_sided_derivatives(g, 0.5);
  CHECK(d.left == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(d.right == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(d.raw.size() == 6);
  CHECK_THROWS_AS(one_sided_derivatives(g, 0.0), ConfigError);
}

TEST_CASE("profile derivative at a kink and the subgradient interval") {
  const ProfileFn g = [](double e) { return std::max(e, 2.0 * e - 0.5); };
  const ModulusEstimate m = calm_from_profile(g, 0.5);
  CHECK(*m.left == doctest::Approx(1.0));
  CHECK(*m.right == doctest::Approx(2.0));
  CHECK(m.value == doctest::Approx(2.0));
  const SubgradientInterval s = subgradient_interval(g, 0.5);
  CHECK(s.lower == doctest::Approx(1.0));
  CHECK(s.upper == doctest::Approx(2.0));
}

TEST_CASE("calm of root_k through the regularization profile") {
  for (int k : {2, 3}) {
    const Fixture f = load_fixture("root_k", {{"k", k}});
    const RobustEvaluator ev(*f.model, f.domain);
    for (double e : {1e-3, 1e-2, 1e-1}) {
      const double ref = std::pow(e, 1.0 / k - 1.0) / k;
      CHECK(calm_from_profile(ev.profile(f.reference_point), e).value == doctest::Approx(ref).epsilon(1e-3));
    }
  }
}

TEST_CASE("direct sampling on Lipschitz functions") {
  const DomainModel X = DomainModel::full_space(2);
  const PointFn f = [](const Vec& x) { return 3.0 * x[0] - 4.0 * x[1]; };
  SamplingConfig cfg;
  cfg.samples_per_radius = 4000;
  const ModulusEstimate calm = calm_direct(f, X, Vec::Zero(2), cfg);
  const ModulusEstimate lip = lip_direct(f, X, Vec::Zero(2), cfg);
  CHECK(calm.value <= 5.0 + 1e-12);
  CHECK(calm.value >= 4.95);
  CHECK(lip.value <= 5.0 + 1e-9);
  CHECK(lip.value >= 4.95);
  CHECK_FALSE(calm.infinite);
  CHECK(calm.shells.size() == 2);
}

TEST_CASE("calm and lip differ at an oscillating point") {
  const Fixture f = load_fixture("x2sin");
  SamplingConfig cfg;
  cfg.radii = {1e-1, 3e-2};
  cfg.samples_per_radius = 4000;
  const PointFn F = f.model->as_point_fn();
  const ModulusEstimate calm = calm_direct(F, f.domain, f.reference_point, cfg);
  const ModulusEstimate lip = lip_direct(F, f.domain, f.reference_point, cfg);
  CHECK(calm.value <= 0.1 + 1e-12);  // |x sin(1/x^2)| <= |x|
  CHECK(lip.value > 10.0 * calm.value);
}

TEST_CASE("infinite calmness of sqrt at 0 is flagged") {
  const DomainModel X = DomainModel::full_space(1);
  const PointFn f = [](const Vec& x) { return std::sqrt(std::abs(x[0])); };
  SamplingConfig cfg;
  cfg.radii = {1e-2, 1e-5};
  const ModulusEstimate m = calm_direct(f, X, Vec::Zero(1), cfg);
  CHECK(m.infinite);
  CHECK(std::isinf(m.value));
}

TEST_CASE("shell maxima never drop when samples are added") {
  const DomainModel X = DomainModel::full_space(2);
  const PointFn f = [](const Vec& x) { return std::abs(x[0]) + 2.0 * std::abs(x[1]); };
  SamplingConfig few, many;
  few.samples_per_radius = 100;
  many.samples_per_radius = 1000;
  const ModulusEstimate a = lip_direct(f, X, Vec::Zero(2), few);
  const ModulusEstimate b = lip_direct(f, X, Vec::Zero(2), many);
  for (std::size_t s = 0; s < a.shells.size(); ++s) CHECK(b.shells[s].max_ratio >= a.shells[s].max_ratio);
}

TEST_CASE("serial and parallel sampling agree bitwise") {
  const Fixture f = load_fixture("example24b");
  SamplingConfig cfg;
  cfg.samples_per_radius = 3000;
  const PointFn F = f.model->as_point_fn();
  const ModulusEstimate a = lip_direct(F, f.domain, f.reference_point, cfg, Exec::Serial);
  const ModulusEstimate b = lip_direct(F, f.domain, f.reference_point, cfg, Exec::Parallel);
  CHECK(a.value == b.value);
  CHECK(a.samples == b.samples);
}

TEST_CASE("lip through the limsup of calm on a convex domain") {
  const Fixture f = load_fixture("max_affine");
  LimsupConfig cfg;
  cfg.neighborhoods = {0.5, 0.25};
  cfg.centers = 16;
  const ModulusEstimate m = lip_via_calm_limsup(f.model->as_point_fn(), f.domain, Vec::Constant(1, 0.5), cfg);
  CHECK(m.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(m.flags.empty());
}

TEST_CASE("o(1/eps) report") {
  const ProfileFn g = [](double e) { return std::sqrt(e); };
  const OOneOverEpsReport r = o_one_over_eps_report(g, {1e-4, 1e-1, 1e-2, 1e-3});
  CHECK(r.rows.front().eps == 1e-1);
  CHECK(r.decrease == doctest::Approx(std::sqrt(1e3)).epsilon(1e-6));
  CHECK(r.pass);
  const ProfileFn lin = [](double e) { return std::log(e); };  // eps * calm = 1, not o(1/eps)
  CHECK_FALSE(o_one_over_eps_report(lin, {1e-1, 1e-4}).pass);
}

TEST_CASE("calm and lip of the regularization agree on an affine function") {
  const Fixture f = load_fixture("affine2");
  const RobustEvaluator ev(*f.model, f.domain);
  const AgreementReport r = calm_lip_agreement_report(ev, f.reference_point, {0.1, 0.01}, {});
  CHECK(r.pass);
  for (const auto& row : r.rows) CHECK(row.calm_est == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
}
