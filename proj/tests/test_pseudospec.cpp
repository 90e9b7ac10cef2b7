#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "robreg/pseudospec.hpp"

using namespace robreg;
using pseudo::Complex;

namespace {
CMat jordan2() {
  CMat J = CMat::Zero(2, 2);
  J(0, 1) = 1.0;
  return J;
}

// Singular values of [[z, -1], [0, z]]: s1^2 + s2^2 = 2|z|^2 + 1, s1 s2 = |z|^2.
double jordan_sigma_min(Complex z) {
  const double a = std::norm(z), tr = 2.0 * a + 1.0;
  return std::sqrt((tr - std::sqrt(tr * tr - 4.0 * a * a)) / 2.0);
}
}  // namespace

TEST_CASE("resolvent sigma_min of the Jordan block") {
  for (Complex z : {Complex(0.3, 0.0), Complex(-1.0, 2.0), Complex(0.0, 0.01), Complex(5.0, -5.0)}) {
    CHECK(pseudo::sigma_min_resolvent(jordan2(), z) == doctest::Approx(jordan_sigma_min(z)).epsilon(1e-12));
  }
}

TEST_CASE("spectral abscissa and radius") {
  CMat A = CMat::Zero(3, 3);
  A(0, 0) = Complex(1.0, 2.0);
  A(1, 1) = -3.0;
  A(2, 2) = Complex(0.5, -0.5);
  CHECK(pseudo::spectral_abscissa(A) == doctest::Approx(1.0));
  CHECK(pseudo::spectral_radius(A) == doctest::Approx(3.0));
}

TEST_CASE("normal matrices shift by eps") {
  CMat A = CMat::Zero(2, 2);
  A(0, 0) = Complex(1.0, 2.0);
  A(1, 1) = -1.0;
  for (double e : {1e-3, 0.1, 0.5}) {
    CHECK(pseudo::pseudospectral_abscissa(A, e).value == doctest::Approx(1.0 + e).epsilon(1e-9));
    CHECK(pseudo::pseudospectral_radius(A, e).value == doctest::Approx(std::sqrt(5.0) + e).epsilon(1e-9));
  }
}

TEST_CASE("Jordan block abscissa and radius") {
  for (double e : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const pseudo::Result a = pseudo::pseudospectral_abscissa(jordan2(), e);
    CHECK(a.value == doctest::Approx(oracle::jordan2_abscissa(e)).epsilon(1e-8));
    CHECK(std::abs(pseudo::sigma_min_resolvent(jordan2(), a.arg) - e) <= 1e-8 * (1 + e));
    CHECK(pseudo::pseudospectral_radius(jordan2(), e).value == doctest::Approx(oracle::jordan2_abscissa(e)).epsilon(1e-8));
  }
  CHECK(pseudo::pseudospectral_abscissa(jordan2(), 0.0).value == 0.0);
}

TEST_CASE("small eps needs repeated window growth") {
  const pseudo::Result r = pseudo::pseudospectral_abscissa(jordan2(), 1e-8);
  CHECK(r.value == doctest::Approx(oracle::jordan2_abscissa(1e-8)).epsilon(1e-6));
}

TEST_CASE("execution policy does not change the result") {
  CMat A(3, 3);
  A << Complex(-1, 1), 2, 0, 0, Complex(-0.5, -2), 1, 0.3, 0, -2;
  const pseudo::Result s = pseudo::pseudospectral_abscissa(A, 0.05, {}, Exec::Serial);
  const pseudo::Result p = pseudo::pseudospectral_abscissa(A, 0.05, {}, Exec::Parallel);
  CHECK(s.value == p.value);
  CHECK(s.arg == p.arg);
}

TEST_CASE("profile over eps is monotone") {
  const RobustProfile p = pseudo::spectral_epsilon_profile(jordan2(), RadiusSpec({1e-3, 1e-2, 1e-1}),
                                                           pseudo::Quantity::Abscissa);
  CHECK(p.monotone());
  CHECK(p.values[2] > p.values[0]);
}

TEST_CASE("bad queries") {
  CHECK_THROWS_AS(pseudo::pseudospectral_abscissa(CMat::Zero(2, 3), 0.1), DimensionError);
  CHECK_THROWS_AS(pseudo::pseudospectral_abscissa(jordan2(), -0.1), ConfigError);
  pseudo::GridConfig g;
  g.resolution = 8;
  CHECK_THROWS_AS(pseudo::pseudospectral_abscissa(jordan2(), 0.1, g), ConfigError);
}
