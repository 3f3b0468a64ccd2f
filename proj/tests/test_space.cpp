// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "helkort/analysis.hpp"
#include "helkort/space.hpp"

using namespace helkort;

namespace {

ExactSolution poly_xy(double cx2, double cy2) {
  // cx2 x^2 + cy2 y^2
  ExactSolution e;
  e.value = [=](const Eigen::Vector2d& p) {
    return Complex(cx2 * p.x() * p.x() + cy2 * p.y() * p.y());
  };
  e.gradient = [=](const Eigen::Vector2d& p) {
    return Eigen::Vector2cd(2.0 * cx2 * p.x(), 2.0 * cy2 * p.y());
  };
  e.hessian = [=](const Eigen::Vector2d&) {
    Eigen::Matrix2cd H;
    H << 2.0 * cx2, 0.0, 0.0, 2.0 * cy2;
    return H;
  };
  e.third = [](const Eigen::Vector2d&) { return Eigen::Vector4cd::Zero().eval(); };
  return e;
}

ExactSolution sine_product() {
  const double pi = M_PI;
  ExactSolution e;
  e.value = [pi](const Eigen::Vector2d& p) {
    return Complex(std::sin(pi * p.x()) * std::sin(pi * p.y()));
  };
  e.gradient = [pi](const Eigen::Vector2d& p) {
    return Eigen::Vector2cd(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                            pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
  };
  e.hessian = [pi](const Eigen::Vector2d& p) {
    Eigen::Matrix2cd H;
    const double s = std::sin(pi * p.x()) * std::sin(pi * p.y());
    const double c = std::cos(pi * p.x()) * std::cos(pi * p.y());
    H << -pi * pi * s, pi * pi * c, pi * pi * c, -pi * pi * s;
    return H;
  };
  return e;
}

}  // namespace

TEST_CASE("global DOF counts") {
  auto m0 = std::make_shared<const TriMesh>(build_unit_square_mesh(0));
  auto m1 = std::make_shared<const TriMesh>(build_unit_square_mesh(1));
  CHECK(FeSpace::build(m0, ElementKind::Argyris5).n_dofs() == 29);  // 6*4 + 5
  CHECK(FeSpace::build(m1, ElementKind::Argyris5).n_dofs() == 70);  // 6*9 + 16
  CHECK(FeSpace::build(m0, ElementKind::HCT3).n_dofs() == 17);      // 3*4 + 5
}

TEST_CASE("interpolating a constant") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(1));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  ExactSolution one = poly_xy(0.0, 0.0);
  one.value = [](const Eigen::Vector2d&) { return Complex(1.0); };
  const FeFunction fn = interpolate(space, one);
  for (int v = 0; v < mesh->n_vertices(); ++v) {
    CHECK(fn.coeffs[space.vertex_dof(v, 0)] == Complex(1.0));
    for (int c = 1; c < 6; ++c) CHECK(fn.coeffs[space.vertex_dof(v, c)] == Complex(0.0));
  }
  for (int e = 0; e < mesh->n_edges(); ++e) CHECK(fn.coeffs[space.edge_dof(e)] == Complex(0.0));
}

TEST_CASE("quintic reproduction through the global interpolant") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(1));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  ExactSolution x5;
  x5.value = [](const Eigen::Vector2d& p) { return Complex(std::pow(p.x(), 5)); };
  x5.gradient = [](const Eigen::Vector2d& p) {
    return Eigen::Vector2cd(5.0 * std::pow(p.x(), 4), 0.0);
  };
  x5.hessian = [](const Eigen::Vector2d& p) {
    Eigen::Matrix2cd H = Eigen::Matrix2cd::Zero();
    H(0, 0) = 20.0 * std::pow(p.x(), 3);
    return H;
  };
  const FeFunction fn = interpolate(space, x5);
  for (double x : {0.07, 0.33, 0.81})
    for (double y : {0.12, 0.48, 0.93}) {
      const Complex v = evaluate(fn, {x, y}, 0)[0];
      CHECK(v.real() == doctest::Approx(std::pow(x, 5)).epsilon(1e-9));
    }
}

TEST_CASE("point evaluation of value, gradient and laplacian") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(2));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  const FeFunction fn = interpolate(space, poly_xy(1.0, 1.0));
  const Eigen::RowVectorXcd row = evaluate(fn, {0.3, 0.4}, 2);
  CHECK(row[0].real() == doctest::Approx(0.25).epsilon(1e-11));
  CHECK(row[1].real() == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(row[2].real() == doctest::Approx(0.8).epsilon(1e-10));
  CHECK((row[3] + row[5]).real() == doctest::Approx(4.0).epsilon(1e-10));
  CHECK_THROWS_AS(evaluate(fn, {1.5, 0.5}, 0), std::domain_error);
}

TEST_CASE("norms of the zero function vanish") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(1));
  const FeSpace space = FeSpace::build(mesh, ElementKind::HCT3);
  FeFunction zero;
  zero.space = &space;
  zero.coeffs = Eigen::VectorXcd::Zero(space.n_dofs());
  NormWeights w;
  const Norms n = compute_norms(zero, w);
  CHECK(n.l2 == 0.0);
  CHECK(n.h1_semi == 0.0);
  CHECK(n.h2_semi == 0.0);
  CHECK(n.eps_norm == 0.0);
  CHECK(n.h_eps_norm == 0.0);
}

TEST_CASE("eps norm reduces to the two seminorms when eps = 0") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(2));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  const FeFunction fn = interpolate(space, poly_xy(1.3, -0.4));
  NormWeights w;
  w.epsilon = 0.0;
  const Norms n = compute_norms(fn, w);
  CHECK(n.eps_norm == doctest::Approx(std::hypot(n.h1_semi, n.h2_semi)).epsilon(1e-14));
  CHECK(n.h_eps_norm == n.eps_norm);
}

TEST_CASE("H2 seminorm of sin(pi x) sin(pi y) tends to pi^4") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(5));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  const FeFunction fn = interpolate(space, sine_product());
  NormWeights w;
  w.epsilon = 0.0;
  const Norms n = compute_norms(fn, w);
  CHECK(n.h2_semi * n.h2_semi == doctest::Approx(std::pow(M_PI, 4)).epsilon(1e-3));
}

TEST_CASE("norm monotonicity") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(2));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  const FeFunction fn = interpolate(space, plane_wave({Complex(5.0, 0.0), Complex(3.0, 0.0)}));
  NormWeights w;
  w.epsilon = 1.0;
  w.include_director_term = true;
  w.director = [](int) { return Eigen::Vector2d(1.0, 0.0); };
  const Norms n = compute_norms(fn, w);
  CHECK(n.h_eps_norm >= n.eps_norm);
  CHECK(n.eps_norm >= n.h2_semi);
}

TEST_CASE("interpolation is a projection") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(1));
  for (ElementKind kind : {ElementKind::Argyris5, ElementKind::HCT3}) {
    const FeSpace space = FeSpace::build(mesh, kind);
    const FeFunction fn = interpolate(space, plane_wave({Complex(3.0, 0.0), Complex(2.0, 0.0)}));
    const FeFunction again = interpolate(space, field_as_exact(fn));
    CHECK((again.coeffs - fn.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("plane-wave interpolation converges at fourth order in H2") {
  // dispersion-magnitude wave along the x-axis
  const Eigen::Vector2cd d(Complex(7.8615, 0.0), Complex(0.0, 0.0));
  const ExactSolution wave = plane_wave(d);
  NormWeights w;
  w.epsilon = 0.0;
  std::vector<double> err;
  for (int level = 2; level <= 5; ++level) {
    auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(level));
    const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
    const Norms n = compute_error_norms(interpolate(space, wave), wave, w);
    err.push_back(std::sqrt(n.l2 * n.l2 + n.h1_semi * n.h1_semi + n.h2_semi * n.h2_semi));
  }
  double mean_rate = 0.0;
  for (size_t i = 1; i < err.size(); ++i) mean_rate += std::log2(err[i - 1] / err[i]);
  mean_rate /= static_cast<double>(err.size() - 1);
  CHECK(mean_rate >= 3.7);
}

TEST_CASE("exact solution self test") {
  const ExactSolution wave = plane_wave({Complex(4.0, 0.0), Complex(-2.0, 1.0)});
  CHECK_NOTHROW(wave.self_test({{0.2, 0.3}, {0.7, 0.9}}));

  ExactSolution broken = poly_xy(1.0, 1.0);
  broken.gradient = [](const Eigen::Vector2d&) {
    return Eigen::Vector2cd(1.0, 0.0);  // wrong on purpose
  };
  CHECK_THROWS_AS(broken.self_test({{0.25, 0.75}}), std::runtime_error);
}
