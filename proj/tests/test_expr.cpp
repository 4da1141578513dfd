#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "prodimm/errors.hpp"
#include "prodimm/expr.hpp"

using namespace prodimm;
using testutil::v2;

namespace {

double eval(const std::string& text, const Vec& u) {
  return parse_expression(text, static_cast<int>(u.size())).value(u);
}

double deriv(const std::string& text, const Vec& u, int axis) {
  return parse_expression(text, static_cast<int>(u.size())).deriv(u, axis);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  Vec u = v2(0.0, 0.0);
  CHECK(eval("2+3*4^2", u) == doctest::Approx(50.0));
  CHECK(eval("2^3^2", u) == doctest::Approx(512.0));  // right-assoc
  CHECK(eval("2*3+4", u) == doctest::Approx(10.0));
  CHECK(eval("(2+3)*4", u) == doctest::Approx(20.0));
  CHECK(eval("7-4-2", u) == doctest::Approx(1.0));  // left-assoc chain
  CHECK(eval("8/4/2", u) == doctest::Approx(1.0));
  CHECK(eval("-2^2", u) == doctest::Approx(-4.0));  // unary minus binds loosest
  CHECK(eval("2^-1", u) == doctest::Approx(0.5));
  CHECK(eval("--3", u) == doctest::Approx(3.0));
}

TEST_CASE("variables are one-based; t names the last axis") {
  Vec u = v2(0.3, 0.7);
  CHECK(eval("u1", u) == doctest::Approx(0.3));
  CHECK(eval("u2", u) == doctest::Approx(0.7));
  CHECK(eval("t", u) == doctest::Approx(0.7));
  CHECK(deriv("t", u, 0) == doctest::Approx(0.0));
  CHECK(deriv("t", u, 1) == doctest::Approx(1.0));

  Vec w(4);
  w << 0.1, 0.2, 0.3, 0.4;
  CHECK(eval("u4", w) == doctest::Approx(0.4));
  CHECK(eval("t", w) == doctest::Approx(0.4));
}

TEST_CASE("function values and exact derivatives") {
  Vec u = v2(0.6, -0.4);
  CHECK(eval("sin(u1)", u) == doctest::Approx(std::sin(0.6)));
  CHECK(eval("cos(u1)", u) == doctest::Approx(std::cos(0.6)));
  CHECK(eval("sinh(u2)", u) == doctest::Approx(std::sinh(-0.4)));
  CHECK(eval("cosh(u2)", u) == doctest::Approx(std::cosh(-0.4)));
  CHECK(eval("exp(u1)", u) == doctest::Approx(std::exp(0.6)));
  CHECK(eval("sqrt(2)", u) == doctest::Approx(std::sqrt(2.0)));

  CHECK(deriv("sin(u1)", u, 0) == doctest::Approx(std::cos(0.6)));
  CHECK(deriv("cos(u1)", u, 0) == doctest::Approx(-std::sin(0.6)));
  CHECK(deriv("sinh(u2)", u, 1) == doctest::Approx(std::cosh(-0.4)));
  CHECK(deriv("cosh(u2)", u, 1) == doctest::Approx(std::sinh(-0.4)));
  CHECK(deriv("exp(u1)", u, 0) == doctest::Approx(std::exp(0.6)));
  CHECK(deriv("sqrt(u1)", u, 0) == doctest::Approx(0.5 / std::sqrt(0.6)));
  CHECK(deriv("sin(u1)", u, 1) == doctest::Approx(0.0));
}

TEST_CASE("derivatives through products, quotients and powers") {
  Vec u = v2(0.8, 1.3);
  // d/du1 [u1^2 * sin(u2)] = 2 u1 sin(u2)
  CHECK(deriv("u1^2*sin(u2)", u, 0) == doctest::Approx(2 * 0.8 * std::sin(1.3)));
  CHECK(deriv("u1^2*sin(u2)", u, 1) == doctest::Approx(0.64 * std::cos(1.3)));
  // d/du1 [u1 / u2] = 1/u2, d/du2 = -u1/u2^2
  CHECK(deriv("u1/u2", u, 0) == doctest::Approx(1.0 / 1.3));
  CHECK(deriv("u1/u2", u, 1) == doctest::Approx(-0.8 / (1.3 * 1.3)));
  // constant exponent: d/du1 u1^3 = 3 u1^2 (no log term)
  CHECK(deriv("u1^3", u, 0) == doctest::Approx(3 * 0.64));
  // variable exponent: d/du1 2^u1 = ln 2 * 2^u1
  CHECK(deriv("2^u1", u, 0) == doctest::Approx(std::log(2.0) * std::pow(2.0, 0.8)));
  // chain rule: d/du1 sin(cos(u1)) = -cos(cos u1) sin u1
  CHECK(deriv("sin(cos(u1))", u, 0)
        == doctest::Approx(-std::cos(std::cos(0.8)) * std::sin(0.8)));
}

TEST_CASE("scientific notation and decimals") {
  Vec u = v2(0.0, 0.0);
  CHECK(eval("1.5e-2", u) == doctest::Approx(0.015));
  CHECK(eval("2.5", u) == doctest::Approx(2.5));
  CHECK(eval("1e3", u) == doctest::Approx(1000.0));
}

TEST_CASE("diagnostics: out-of-range variables and malformed input") {
  CHECK_THROWS_AS((void)parse_expression("u5", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("u0", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("2+", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("(2+3", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("tan(u1)", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("sin u1", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("", 2), ConfigError);
  CHECK_THROWS_AS((void)parse_expression("2 3", 2), ConfigError);
}

TEST_CASE("expression lists split on top-level commas only") {
  std::vector<Expr> fs = parse_expression_list("cos(u1), sin(u1), u2", 2);
  REQUIRE(fs.size() == 3);
  Vec u = v2(1.1, -0.2);
  CHECK(fs[0].value(u) == doctest::Approx(std::cos(1.1)));
  CHECK(fs[1].value(u) == doctest::Approx(std::sin(1.1)));
  CHECK(fs[2].value(u) == doctest::Approx(-0.2));
}
