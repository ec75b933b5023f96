#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "entpert/quadrature.hpp"

using entpert::gauss_legendre;
using entpert::trapezoid;

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1 exactly") {
  const auto rule = gauss_legendre(8, -1.0, 1.0);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.points[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(s == doctest::Approx(exact).epsilon(0.0).scale(1.0));
  }
}

TEST_CASE("gauss-legendre weights sum to the interval length") {
  const auto rule = gauss_legendre(40, -3.0, 7.0);
  CHECK(rule.weights.sum() == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre nodes are symmetric on a symmetric interval") {
  const auto rule = gauss_legendre(25, -1.0, 1.0);
  for (int i = 0; i < rule.size(); ++i) {
    CHECK(rule.points[i] == doctest::Approx(-rule.points[rule.size() - 1 - i]).epsilon(1e-14));
    CHECK(rule.weights[i] == doctest::Approx(rule.weights[rule.size() - 1 - i]).epsilon(1e-14));
  }
}

TEST_CASE("gauss-legendre handles a gaussian to near machine precision") {
  const auto rule = gauss_legendre(200, -8.0, 8.0);
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    s += rule.weights[i] * std::exp(-rule.points[i] * rule.points[i]);
  CHECK(s == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("trapezoid rule basics") {
  const auto rule = trapezoid(0.0, 1.0, 1001);
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i) s += rule.weights[i] * rule.points[i] * rule.points[i];
  CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("degenerate rules are rejected") {
  CHECK_THROWS_AS(gauss_legendre(0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(10, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(trapezoid(0.0, 1.0, 1), std::invalid_argument);
}
