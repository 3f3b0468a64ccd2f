// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helkort/quadrature.hpp"

using namespace helkort;

namespace {

// reference oracle: integral of x^a y^b over the reference triangle is
// a! b! / (a+b+2)!
double monomial_integral(int a, int b) {
  double value = 1.0;
  for (int i = 1; i <= b; ++i) value *= static_cast<double>(i) / (a + i);
  return value / ((a + b + 1.0) * (a + b + 2.0));
}

double apply_triangle(const QuadratureRule& rule, int a, int b) {
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double x = rule.points(q, 1), y = rule.points(q, 2);
    sum += rule.weights[q] * std::pow(x, a) * std::pow(y, b);
  }
  return sum;
}

}  // namespace

TEST_CASE("triangle rules: weight sum and positivity") {
  for (int degree = 1; degree <= 20; ++degree) {
    const QuadratureRule rule = triangle_rule(degree);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(rule.points.minCoeff() >= -1e-15);
  }
  CHECK_THROWS_AS(triangle_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(triangle_rule(21), std::invalid_argument);
}

TEST_CASE("triangle rules: exactness sweep against the factorial formula") {
  for (int degree = 1; degree <= 20; ++degree) {
    const QuadratureRule rule = triangle_rule(degree);
    for (int d = 0; d <= degree; ++d)
      for (int b = 0; b <= d; ++b) {
        const double exact = monomial_integral(d - b, b);
        CHECK(apply_triangle(rule, d - b, b) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("triangle rules: named values") {
  CHECK(apply_triangle(triangle_rule(4), 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(apply_triangle(triangle_rule(2), 1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  const double x5y5 = monomial_integral(5, 5);  // 5!5!/12!
  CHECK(apply_triangle(triangle_rule(10), 5, 5) == doctest::Approx(x5y5).epsilon(1e-12));
}

TEST_CASE("edge rules") {
  for (int degree = 1; degree <= 40; ++degree) {
    const QuadratureRule rule = edge_rule(degree);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.weights.minCoeff() > 0.0);
    for (int p = 0; p <= degree; ++p) {
      double sum = 0.0;
      for (int q = 0; q < rule.size(); ++q)
        sum += rule.weights[q] * std::pow(rule.points(q, 0), p);
      CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-12));
    }
  }
  CHECK(edge_rule(3).size() >= 2);
  CHECK_THROWS_AS(edge_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(41), std::invalid_argument);
}

TEST_CASE("edge rule named values") {
  const QuadratureRule r3 = edge_rule(3);
  double t3 = 0.0;
  for (int q = 0; q < r3.size(); ++q) t3 += r3.weights[q] * std::pow(r3.points(q, 0), 3);
  CHECK(t3 == doctest::Approx(0.25).epsilon(1e-14));

  const QuadratureRule r10 = edge_rule(10);
  double t10 = 0.0;
  for (int q = 0; q < r10.size(); ++q) t10 += r10.weights[q] * std::pow(r10.points(q, 0), 10);
  CHECK(t10 == doctest::Approx(1.0 / 11.0).epsilon(1e-13));
}
