#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "felab/quadrature.hpp"

using namespace felab;

namespace {

// Analytic reference integrals for the monomial sweeps.
double triangle_monomial_integral(int a, int b) {
  // int_T x^a y^b = a! b! / (a+b+2)!
  double value = 1.0;
  for (int k = 1; k <= a; ++k) value *= k;
  for (int k = 1; k <= b; ++k) value *= k;
  for (int k = 1; k <= a + b + 2; ++k) value /= k;
  return value;
}

double box_monomial_integral(int a, int b) {
  const double ix = (a % 2 == 0) ? 2.0 / (a + 1) : 0.0;
  const double iy = (b % 2 == 0) ? 2.0 / (b + 1) : 0.0;
  return ix * iy;
}

double apply(const QuadRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
  return s;
}

}  // namespace

TEST_CASE("simplex degree 1 is the centroid rule") {
  const QuadRule rule = simplex_rule(1);
  REQUIRE(rule.points.size() == 1);
  CHECK(rule.points[0].x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rule.points[0].y == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("simplex degree 2 uses the edge midpoints with weight 1/6") {
  const QuadRule rule = simplex_rule(2);
  REQUIRE(rule.points.size() == 3);
  for (double w : rule.weights) CHECK(w == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  // Midpoints (1/2,0), (1/2,1/2), (0,1/2) in some order.
  double sx = 0.0, sy = 0.0;
  for (const Vec2& p : rule.points) {
    sx += p.x;
    sy += p.y;
    CHECK((p.x == 0.5 || p.x == 0.0));
  }
  CHECK(sx == doctest::Approx(1.0));
  CHECK(sy == doctest::Approx(1.0));
  // Exactness sweep pinned in the contract: x, y, x^2, xy, y^2.
  for (auto [a, b] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}})
    CHECK(apply(rule, a, b) == doctest::Approx(triangle_monomial_integral(a, b)).epsilon(1e-14));
}

TEST_CASE("simplex rules: weight sum, positivity, monomial exactness") {
  for (int degree = 1; degree <= 10; ++degree) {
    const QuadRule rule = simplex_rule(degree);
    CHECK(std::abs(rule.weight_sum() - 0.5) < 1e-14);
    CHECK(rule.exact_degree >= degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    for (int a = 0; a <= rule.exact_degree; ++a)
      for (int b = 0; a + b <= rule.exact_degree; ++b)
        CHECK(std::abs(apply(rule, a, b) - triangle_monomial_integral(a, b)) < 1e-12);
  }
}

TEST_CASE("box degree 1 is the midpoint rule") {
  const QuadRule rule = box_rule(1);
  REQUIRE(rule.points.size() == 1);
  CHECK(rule.points[0].x == doctest::Approx(0.0));
  CHECK(rule.points[0].y == doctest::Approx(0.0));
  CHECK(rule.weights[0] == doctest::Approx(4.0));
}

TEST_CASE("box degree 3 is the 2x2 Gauss rule at +-1/sqrt(3)") {
  const QuadRule rule = box_rule(3);
  REQUIRE(rule.points.size() == 4);
  const double g = 1.0 / std::sqrt(3.0);
  for (const Vec2& p : rule.points) {
    CHECK(std::abs(std::abs(p.x) - g) < 1e-15);
    CHECK(std::abs(std::abs(p.y) - g) < 1e-15);
  }
  for (double w : rule.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("box rules: weight sum, positivity, monomial exactness") {
  for (int degree = 1; degree <= 11; ++degree) {
    const QuadRule rule = box_rule(degree);
    CHECK(std::abs(rule.weight_sum() - 4.0) < 1e-14);
    CHECK(rule.exact_degree >= degree);
    for (double w : rule.weights) CHECK(w > 0.0);
    for (int a = 0; a <= rule.exact_degree; ++a)
      for (int b = 0; b <= rule.exact_degree; ++b)
        if (a + b <= rule.exact_degree)
          CHECK(std::abs(apply(rule, a, b) - box_monomial_integral(a, b)) < 1e-12);
  }
}

TEST_CASE("requested degree outside the supported range is rejected") {
  CHECK_THROWS_AS(simplex_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(simplex_rule(11), std::invalid_argument);
  CHECK_THROWS_AS(box_rule(12), std::invalid_argument);
}
