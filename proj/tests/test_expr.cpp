#include <cmath>

#include "doctest.h"
#include "robreg/expr.hpp"
#include "robreg/function_model.hpp"

using namespace robreg;
using expr::Expression;

namespace {
Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}
}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("1 + 2 * 3", 1).evaluate(pt({0})) == 7.0);
  CHECK(Expression::parse("8 - 3 - 2", 1).evaluate(pt({0})) == 3.0);
  CHECK(Expression::parse("2 * x1^3", 1).evaluate(pt({2})) == 16.0);
  CHECK(Expression::parse("-x1^2", 1).evaluate(pt({3})) == -9.0);
  CHECK(Expression::parse("(x1 + x2) / 4", 2).evaluate(pt({1, 3})) == 1.0);
  CHECK(Expression::parse("1.5e-1 * 2", 1).evaluate(pt({0})) == doctest::Approx(0.3));
}

TEST_CASE("functions") {
  const Expression e = Expression::parse("sqrt(abs(x1)) + max(x1, x2) - min(x1, x2)", 2);
  CHECK(e.evaluate(pt({-4, 1})) == doctest::Approx(2.0 + 1.0 + 4.0));
}

TEST_CASE("piecewise guards pick the first satisfied branch") {
  const Expression e = Expression::parse("piecewise{ x1 < 0 : -x1; x1 >= 0 : sqrt(x1); }", 1);
  CHECK(e.evaluate(pt({-2})) == 2.0);
  CHECK(e.evaluate(pt({4})) == 2.0);
  CHECK(e.evaluate(pt({0})) == 0.0);
  CHECK_THROWS_AS(Expression::parse("piecewise{ x1 < 1 : 1; }", 1).evaluate(pt({2})), DomainError);
  CHECK_THROWS_AS(Expression::parse("piecewise{ sqrt(x1) < 1 : 1; }", 1), ParseError);
}

TEST_CASE("printing round-trips structurally") {
  for (const char* text : {"x1 + 2 * x2 - 3", "-(x1 - x2)^2", "max(abs(x1), sqrt(x2 + 1)) / 2",
                           "piecewise{ x1 * x2 <= 1 : x1; x1 > -1 : -x2; }", "-2.5e-3 * x1"}) {
    const Expression a = Expression::parse(text, 2);
    const Expression b = Expression::parse(a.to_string(), 2);
    CHECK_MESSAGE(expr::structurally_equal(a, b), text);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    Expression::parse("x1 + * 2", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(Expression::parse("x3", 2), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(x1)", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("x1^-1", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("(x1", 1), ParseError);
  CHECK_THROWS_AS(Expression::parse("x1 x1", 1), ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(Expression::parse("1 / x1", 1).evaluate(pt({0})), DomainError);
  CHECK_THROWS_AS(Expression::parse("sqrt(x1)", 1).evaluate(pt({-1})), DomainError);
  CHECK_THROWS_AS(Expression::parse("x1", 1).evaluate(pt({1, 2})), DimensionError);
}

TEST_CASE("polynomial detection") {
  CHECK(expr::is_polynomial(Expression::parse("x1^2 - 3 * x1 * x2 + 1", 2).root()));
  CHECK_FALSE(expr::is_polynomial(Expression::parse("abs(x1)", 1).root()));
  CHECK_FALSE(expr::is_polynomial(Expression::parse("x1 / 2", 1).root()));
}

TEST_CASE("function models") {
  Mat H(2, 2);
  H << 2, 1, 1, 3;
  const FunctionModel q = FunctionModel::quadratic(H, pt({1, -1}), 0.5);
  const Vec x = pt({1, 2});
  CHECK(q(x) == doctest::Approx(x.dot(H * x) + 2.0 * (1 - 2) + 0.5));
  const FunctionModel n = FunctionModel::affine_norm(H, pt({0, -1}));
  CHECK(n(x) == doctest::Approx((H * x - pt({0, 1})).norm()));
  const FunctionModel sa = FunctionModel::spectral_abscissa(2);
  CHECK(sa(pt({-1, 5, 0, -3})) == doctest::Approx(-1.0));
  const FunctionModel sr = FunctionModel::spectral_radius(2);
  CHECK(sr(pt({0, 1, -1, 0})) == doctest::Approx(1.0));
  CHECK_THROWS(q(pt({1})));
}

TEST_CASE("row-major flattening") {
  Mat A(2, 2);
  A << 1, 2, 3, 4;
  const Vec v = flatten_row_major(A);
  CHECK(v[1] == 2.0);
  CHECK(unflatten_row_major(v, 2) == A);
}
