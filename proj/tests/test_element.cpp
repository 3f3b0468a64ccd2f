// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helkort/element.hpp"
#include "helkort/space.hpp"

using namespace helkort;

namespace {

double defect_of(const TriangleFrame& frame, ElementKind kind) {
  return duality_defect(build_physical_basis(frame, kind), frame);
}

// interpolates a polynomial-like exact field on a single element
Eigen::VectorXd interpolate_local(const PhysicalElementBasis& basis, const TriangleFrame& frame,
                                  const ExactSolution& exact) {
  const auto dofs = local_dof_functionals(frame, basis.kind);
  Eigen::VectorXd c(dofs.size());
  for (size_t i = 0; i < dofs.size(); ++i) {
    const Eigen::Vector2d p = dofs[i].point;
    using K = DofFunctional::Kind;
    switch (dofs[i].kind) {
      case K::Value:
        c[i] = exact.value(p).real();
        break;
      case K::GradX:
        c[i] = exact.gradient(p)[0].real();
        break;
      case K::GradY:
        c[i] = exact.gradient(p)[1].real();
        break;
      case K::HessXX:
        c[i] = exact.hessian(p)(0, 0).real();
        break;
      case K::HessXY:
        c[i] = exact.hessian(p)(0, 1).real();
        break;
      case K::HessYY:
        c[i] = exact.hessian(p)(1, 1).real();
        break;
      case K::EdgeNormal: {
        const Eigen::Vector2cd g = exact.gradient(p);
        c[i] = (dofs[i].direction.x() * g[0] + dofs[i].direction.y() * g[1]).real();
        break;
      }
    }
  }
  return c;
}

ExactSolution monomial_field(int a, int b) {
  ExactSolution e;
  e.value = [a, b](const Eigen::Vector2d& p) {
    return Complex(std::pow(p.x(), a) * std::pow(p.y(), b));
  };
  e.gradient = [a, b](const Eigen::Vector2d& p) {
    return Eigen::Vector2cd(a * std::pow(p.x(), a - 1) * std::pow(p.y(), b),
                            b * std::pow(p.x(), a) * std::pow(p.y(), b - 1));
  };
  e.hessian = [a, b](const Eigen::Vector2d& p) {
    Eigen::Matrix2cd H;
    H << a * (a - 1) * std::pow(p.x(), a - 2) * std::pow(p.y(), b),
        a * b * std::pow(p.x(), a - 1) * std::pow(p.y(), b - 1),
        a * b * std::pow(p.x(), a - 1) * std::pow(p.y(), b - 1),
        b * (b - 1) * std::pow(p.x(), a) * std::pow(p.y(), b - 2);
    return H;
  };
  return e;
}

std::array<Eigen::Vector2d, 3> random_triangle(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::array<Eigen::Vector2d, 3> c = {Eigen::Vector2d(u(rng), u(rng)) * scale,
                                        Eigen::Vector2d(u(rng), u(rng)) * scale,
                                        Eigen::Vector2d(u(rng), u(rng)) * scale};
    const double area2 = (c[1] - c[0]).x() * (c[2] - c[0]).y() - (c[1] - c[0]).y() * (c[2] - c[0]).x();
    const double h = std::max({(c[1] - c[0]).norm(), (c[2] - c[1]).norm(), (c[0] - c[2]).norm()});
    if (area2 > 0.2 * h * h) return c;  // shape-regular only
    if (area2 < 0.0) std::swap(c[1], c[2]);
    if (-area2 > 0.2 * h * h) {
      return c;
    }
  }
}

}  // namespace

TEST_CASE("argyris duality on the reference triangle") {
  const TriangleFrame frame = make_frame({Eigen::Vector2d(0, 0), {1, 0}, {0, 1}});
  CHECK(defect_of(frame, ElementKind::Argyris5) < 1e-10);
}

TEST_CASE("duality holds on random and scaled triangles") {
  std::mt19937 rng(7);
  for (double scale : {1e-2, 1.0, 1e2}) {
    // At physical scale 1e-2 the Hessian functionals amplify coefficient
    // roundoff by 1/h^2 = 2.5e3, so eps-level coefficient storage alone costs
    // ~1e-9; a missing h-scaling in the local solve would cost ~1e-4.
    const double tol = scale < 0.1 ? 1e-8 : 1e-9;
    for (int trial = 0; trial < 5; ++trial) {
      const TriangleFrame frame = make_frame(random_triangle(rng, scale));
      CHECK(defect_of(frame, ElementKind::Argyris5) < tol);
      CHECK(defect_of(frame, ElementKind::HCT3) < tol);
    }
  }
}

TEST_CASE("quintic reproduction: interpolating x^5 is pointwise exact") {
  std::mt19937 rng(11);
  const TriangleFrame frame = make_frame(random_triangle(rng, 1.0));
  const PhysicalElementBasis basis = build_physical_basis(frame, ElementKind::Argyris5);
  const Eigen::VectorXd c = interpolate_local(basis, frame, monomial_field(5, 0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double l0 = u(rng), l1 = u(rng) * (1.0 - l0);
    const Eigen::Vector2d p =
        l0 * frame.corner[0] + l1 * frame.corner[1] + (1.0 - l0 - l1) * frame.corner[2];
    const Eigen::MatrixXd table = basis.eval(p, 0);
    const double value = (table.col(0).transpose() * c)(0);
    CHECK(value == doctest::Approx(std::pow(p.x(), 5)).epsilon(1e-9));
  }
}

TEST_CASE("cubic reproduction for the HCT macroelement") {
  std::mt19937 rng(13);
  const TriangleFrame frame = make_frame(random_triangle(rng, 1.0));
  const PhysicalElementBasis basis = build_physical_basis(frame, ElementKind::HCT3);
  const Eigen::VectorXd c = interpolate_local(basis, frame, monomial_field(3, 0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double l0 = u(rng), l1 = u(rng) * (1.0 - l0);
    const Eigen::Vector2d p =
        l0 * frame.corner[0] + l1 * frame.corner[1] + (1.0 - l0 - l1) * frame.corner[2];
    const Eigen::MatrixXd table = basis.eval(p, 0);
    const double value = (table.col(0).transpose() * c)(0);
    CHECK(value == doctest::Approx(std::pow(p.x(), 3)).epsilon(1e-9));
  }
}

TEST_CASE("derivative evaluation") {
  const TriangleFrame frame = make_frame({Eigen::Vector2d(0.1, 0.2), {0.9, 0.3}, {0.4, 1.1}});
  const PhysicalElementBasis basis = build_physical_basis(frame, ElementKind::Argyris5);

  SUBCASE("constant reproduction: value 1, gradient 0") {
    ExactSolution one;
    one.value = [](const Eigen::Vector2d&) { return Complex(1.0); };
    one.gradient = [](const Eigen::Vector2d&) { return Eigen::Vector2cd::Zero().eval(); };
    one.hessian = [](const Eigen::Vector2d&) { return Eigen::Matrix2cd::Zero().eval(); };
    const Eigen::VectorXd c = interpolate_local(basis, frame, one);
    const Eigen::Vector2d p = (frame.corner[0] + frame.corner[1] + frame.corner[2]) / 3.0;
    const Eigen::MatrixXd table = basis.eval(p, 1);
    CHECK((table.col(0).transpose() * c)(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs((table.col(1).transpose() * c)(0)) < 1e-11);
    CHECK(std::abs((table.col(2).transpose() * c)(0)) < 1e-11);
  }

  SUBCASE("laplacian of x^2 + y^2 is 4") {
    ExactSolution q;
    q.value = [](const Eigen::Vector2d& p) { return Complex(p.squaredNorm()); };
    q.gradient = [](const Eigen::Vector2d& p) {
      return Eigen::Vector2cd(2.0 * p.x(), 2.0 * p.y());
    };
    q.hessian = [](const Eigen::Vector2d&) {
      return (2.0 * Eigen::Matrix2cd::Identity()).eval();
    };
    const Eigen::VectorXd c = interpolate_local(basis, frame, q);
    const Eigen::Vector2d p(0.45, 0.5);
    const Eigen::MatrixXd table = basis.eval(p, 2);
    const double lap = ((table.col(3) + table.col(5)).transpose() * c)(0);
    CHECK(lap == doctest::Approx(4.0).epsilon(1e-10));
  }

  SUBCASE("third derivatives of x^3 are (6,0,0,0)") {
    const Eigen::VectorXd c = interpolate_local(basis, frame, monomial_field(3, 0));
    const Eigen::Vector2d p(0.5, 0.45);
    const Eigen::MatrixXd table = basis.eval(p, 3);
    CHECK((table.col(6).transpose() * c)(0) == doctest::Approx(6.0).epsilon(1e-8));
    for (int col : {7, 8, 9}) CHECK(std::abs((table.col(col).transpose() * c)(0)) < 1e-8);
  }

  SUBCASE("point outside the triangle is rejected") {
    CHECK_THROWS_AS(basis.eval({5.0, 5.0}, 0), std::domain_error);
  }
}

TEST_CASE("HCT pieces join with C1 continuity") {
  std::mt19937 rng(17);
  const TriangleFrame frame = make_frame(random_triangle(rng, 1.0));
  const PhysicalElementBasis basis = build_physical_basis(frame, ElementKind::HCT3);
  const Eigen::Vector2d z = basis.piece_corner[0][2];
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 3; ++i) {
    const int plus = (i + 1) % 3, minus = (i + 2) % 3;
    const Eigen::Vector2d vi = frame.corner[i];
    const Eigen::Vector2d t = (vi - z).normalized();
    const Eigen::Vector2d n(t.y(), -t.x());
    for (int s = 0; s < 5; ++s) {
      const Eigen::Vector2d p = z + u(rng) * (vi - z);
      const Eigen::MatrixXd a = basis.eval_piece(plus, p, 1);
      const Eigen::MatrixXd b = basis.eval_piece(minus, p, 1);
      for (int j = 0; j < 12; ++j) {
        CHECK(std::abs(a(j, 0) - b(j, 0)) < 1e-9);
        const double dn_a = n.x() * a(j, 1) + n.y() * a(j, 2);
        const double dn_b = n.x() * b(j, 1) + n.y() * b(j, 2);
        CHECK(std::abs(dn_a - dn_b) < 1e-9);
      }
    }
  }
}

TEST_CASE("degenerate triangles are rejected") {
  const TriangleFrame frame =
      make_frame({Eigen::Vector2d(0, 0), {1, 0}, {2, 1e-16}});
  CHECK_THROWS_AS(build_physical_basis(frame, ElementKind::Argyris5), std::invalid_argument);
}

TEST_CASE("global C1 continuity of random coefficient fields") {
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(2));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (ElementKind kind : {ElementKind::Argyris5, ElementKind::HCT3}) {
    const FeSpace space = FeSpace::build(mesh, kind);
    Eigen::VectorXcd coeffs(space.n_dofs());
    for (int i = 0; i < space.n_dofs(); ++i) coeffs[i] = Complex(u(rng), u(rng));
    const ContinuityReport report = c1_continuity_check(space, coeffs);
    const double scale = coeffs.cwiseAbs().maxCoeff();
    CHECK(report.max_value_jump <= 1e-9 * scale);
    CHECK(report.max_normal_jump <= 1e-9 * scale);
  }
}

TEST_CASE("flipping one edge DOF sign on one side breaks continuity (negative control)") {
  // simulates the classic orientation bug: one triangle disagrees about the
  // sign convention of a shared edge-normal DOF
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(2));
  const FeSpace space = FeSpace::build(mesh, ElementKind::Argyris5);
  ExactSolution e = monomial_field(3, 2);
  const FeFunction fn = interpolate(space, e);

  int edge = -1;
  for (int cand = 0; cand < space.mesh().n_edges(); ++cand)
    if (!space.edge_on_boundary(cand) && std::abs(fn.coeffs[space.edge_dof(cand)]) > 0.1) {
      edge = cand;
      break;
    }
  REQUIRE(edge >= 0);
  std::array<int, 2> adjacent = {-1, -1};
  for (int t = 0; t < space.mesh().n_triangles(); ++t)
    for (int i = 0; i < 3; ++i)
      if (space.mesh().triangle_edges[t][i] == edge) (adjacent[0] < 0 ? adjacent[0] : adjacent[1]) = t;

  const Eigen::Vector2d a = space.mesh().vertices[space.mesh().edges[edge][0]];
  const Eigen::Vector2d b = space.mesh().vertices[space.mesh().edges[edge][1]];
  const Eigen::Vector2d n = space.mesh().edge_normal(edge);
  const int global_dof = space.edge_dof(edge);
  double max_jump = 0.0;
  for (int s = 1; s <= 7; ++s) {
    const Eigen::Vector2d p = a + (b - a) * (s / 8.0);
    Complex dn[2];
    for (int side = 0; side < 2; ++side) {
      const int t = adjacent[side];
      const Eigen::MatrixXd table = space.element_basis(t).eval(p, 1);
      Complex ux = 0, uy = 0;
      const auto& dofs = space.cell_dofs(t);
      for (int i = 0; i < table.rows(); ++i) {
        Complex c = fn.coeffs[dofs[i]];
        if (side == 1 && dofs[i] == global_dof) c = -c;  // the bug under test
        ux += c * table(i, 1);
        uy += c * table(i, 2);
      }
      dn[side] = n.x() * ux + n.y() * uy;
    }
    max_jump = std::max(max_jump, std::abs(dn[0] - dn[1]));
  }
  CHECK(max_jump > 1e-3);
}
