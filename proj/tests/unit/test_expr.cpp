#include "cocycle_lab/error.hpp"
#include "cocycle_lab/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cocycle_lab;

namespace {

cplx eval(const std::string& text, std::vector<double> xi) {
  return SymbolExpr::parse(text, static_cast<int>(xi.size()))(xi);
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("arithmetic and precedence") {
    CHECK(eval("1 + 2 * 3", {0.0}).real() == 7.0);
    CHECK(eval("2 ^ 3 ^ 2", {0.0}).real() == 512.0);
    CHECK(eval("-2 ^ 2", {0.0}).real() == -4.0);
    CHECK(eval("(1 + 2) * 3", {0.0}).real() == 9.0);
    CHECK(eval("x1 / x2", {3.0, 4.0}).real() == 0.75);
    CHECK(eval("1e-3 * 2", {0.0}).real() == doctest::Approx(2e-3));
  }

  TEST_CASE("variables, constants and functions") {
    CHECK(eval("r", {3.0, 4.0}).real() == doctest::Approx(5.0));
    CHECK(eval("|x1 - x2|", {1.0, 4.0}).real() == doctest::Approx(3.0));
    CHECK(std::abs(eval("exp(i * pi)", {0.0}) - cplx(-1.0)) < 1e-15);
    CHECK(eval("sin(pi / 2) + cos(0)", {0.0}).real() == doctest::Approx(2.0));
    CHECK(eval("sqrt(16) + log(exp(2))", {0.0}).real() == doctest::Approx(6.0));
    CHECK(eval("im(conj(2 + 3*i))", {0.0}).real() == doctest::Approx(-3.0));
    CHECK(eval("re(abs(-2))", {0.0}).real() == 2.0);
    CHECK(eval("r^0.5", {4.0}).imag() == 0.0);
    CHECK(eval("r^0.5", {4.0}).real() == doctest::Approx(2.0));
  }

  TEST_CASE("smooth cutoff") {
    CHECK(smooth_cutoff(0.5, 1.0, 2.0) == 1.0);
    CHECK(smooth_cutoff(2.5, 1.0, 2.0) == 0.0);
    CHECK(smooth_cutoff(1.5, 1.0, 2.0) == doctest::Approx(0.5));
    for (double s = 1.01; s < 2.0; s += 0.05) {
      CHECK(smooth_cutoff(s, 1.0, 2.0) <= smooth_cutoff(s - 0.01, 1.0, 2.0));
      if (s > 1.2 && s < 1.8) CHECK(smooth_cutoff(s, 1.0, 2.0) < smooth_cutoff(s - 0.01, 1.0, 2.0));
      CHECK(smooth_cutoff(s, 1.0, 2.0) + smooth_cutoff(3.0 - s, 1.0, 2.0) == doctest::Approx(1.0));
    }
    CHECK(eval("cutoff(r, 3, 4)", {2.0}).real() == 1.0);
    CHECK(eval("cutoff(r, 3, 4)", {5.0}).real() == 0.0);
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(SymbolExpr::parse("1 +", 1), Error);
    CHECK_THROWS_AS(SymbolExpr::parse("x3", 2), Error);
    CHECK_THROWS_AS(SymbolExpr::parse("foo(1)", 1), Error);
    CHECK_THROWS_AS(SymbolExpr::parse("cutoff(1, 2)", 1), Error);
    CHECK_THROWS_AS(SymbolExpr::parse("(1 + 2", 1), Error);
    try {
      SymbolExpr::parse("1 + * 2", 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
  }
}
