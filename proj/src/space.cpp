// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helkort/quadrature.hpp"

namespace helkort {

Complex ExactSolution::laplacian(const Eigen::Vector2d& p) const {
  const Eigen::Matrix2cd H = hessian(p);
  return H(0, 0) + H(1, 1);
}

Eigen::Vector2cd ExactSolution::grad_laplacian(const Eigen::Vector2d& p) const {
  const Eigen::Vector4cd t = third(p);
  return {t[0] + t[2], t[1] + t[3]};
}

Complex ExactSolution::director_hessian(const Eigen::Vector2d& p, const Eigen::Vector2d& n) const {
  const Eigen::Matrix2cd H = hessian(p);
  return n.x() * n.x() * H(0, 0) + 2.0 * n.x() * n.y() * H(0, 1) + n.y() * n.y() * H(1, 1);
}

Eigen::Vector2cd ExactSolution::grad_director_hessian(const Eigen::Vector2d& p,
                                                      const Eigen::Vector2d& n) const {
  const Eigen::Vector4cd t = third(p);
  const double nxx = n.x() * n.x(), nxy = 2.0 * n.x() * n.y(), nyy = n.y() * n.y();
  return {nxx * t[0] + nxy * t[1] + nyy * t[2], nxx * t[1] + nxy * t[2] + nyy * t[3]};
}

void ExactSolution::self_test(const std::vector<Eigen::Vector2d>& points, double step,
                              double rel_tol) const {
  for (const Eigen::Vector2d& p : points) {
    const Eigen::Vector2d ex(step, 0.0), ey(0.0, step);
    const Eigen::Vector2cd g = gradient(p);
    const Eigen::Matrix2cd H = hessian(p);
    const double scale = std::max(1.0, std::abs(value(p)));
    const Complex fdx = (value(p + ex) - value(p - ex)) / (2.0 * step);
    const Complex fdy = (value(p + ey) - value(p - ey)) / (2.0 * step);
    if (std::abs(fdx - g[0]) + std::abs(fdy - g[1]) > rel_tol * scale * (1.0 + g.norm()))
      throw std::runtime_error("ExactSolution::self_test: gradient inconsistent with value");
    const Complex fdxx = (gradient(p + ex)[0] - gradient(p - ex)[0]) / (2.0 * step);
    const Complex fdxy = (gradient(p + ey)[0] - gradient(p - ey)[0]) / (2.0 * step);
    const Complex fdyy = (gradient(p + ey)[1] - gradient(p - ey)[1]) / (2.0 * step);
    const double hscale = 1.0 + H.norm();
    if (std::abs(fdxx - H(0, 0)) + std::abs(fdxy - H(0, 1)) + std::abs(fdyy - H(1, 1)) >
        rel_tol * scale * hscale * 3.0)
      throw std::runtime_error("ExactSolution::self_test: Hessian inconsistent with gradient");
  }
}

FeSpace FeSpace::build(std::shared_ptr<const TriMesh> mesh, ElementKind kind) {
  FeSpace s;
  s.mesh_ = std::move(mesh);
  s.kind_ = kind;
  const TriMesh& m = *s.mesh_;
  const int per_vertex = dofs_per_vertex(kind);
  s.n_dofs_ = per_vertex * m.n_vertices() + m.n_edges();

  s.cell_dofs_.resize(m.n_triangles());
  s.basis_.reserve(m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) {
    s.basis_.push_back(build_physical_basis(triangle_frame(m, t), kind));
    auto& dofs = s.cell_dofs_[t];
    dofs.reserve(local_dof_count(kind));
    for (int v = 0; v < 3; ++v)
      for (int c = 0; c < per_vertex; ++c)
        dofs.push_back(per_vertex * m.triangles[t][v] + c);
    for (int e = 0; e < 3; ++e)
      dofs.push_back(per_vertex * m.n_vertices() + m.triangle_edges[t][e]);
  }

  s.vertex_on_boundary_.assign(m.n_vertices(), false);
  s.edge_on_boundary_.assign(m.n_edges(), false);
  for (const BoundaryFacet& f : m.boundary_facets) {
    s.edge_on_boundary_[f.edge] = true;
    s.vertex_on_boundary_[m.edges[f.edge][0]] = true;
    s.vertex_on_boundary_[m.edges[f.edge][1]] = true;
  }

  s.use_buckets_ = m.n_triangles() > 10000;
  if (s.use_buckets_) {
    s.bbox_min_ = s.bbox_max_ = m.vertices[0];
    for (const auto& v : m.vertices) {
      s.bbox_min_ = s.bbox_min_.cwiseMin(v);
      s.bbox_max_ = s.bbox_max_.cwiseMax(v);
    }
    s.grid_n_ = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m.n_triangles()))));
    s.buckets_.assign(static_cast<size_t>(s.grid_n_) * s.grid_n_, {});
    const Eigen::Vector2d span = (s.bbox_max_ - s.bbox_min_).cwiseMax(1e-300);
    for (int t = 0; t < m.n_triangles(); ++t) {
      Eigen::Vector2d lo = m.vertices[m.triangles[t][0]], hi = lo;
      for (int v = 1; v < 3; ++v) {
        lo = lo.cwiseMin(m.vertices[m.triangles[t][v]]);
        hi = hi.cwiseMax(m.vertices[m.triangles[t][v]]);
      }
      const auto cell = [&](const Eigen::Vector2d& p, int axis) {
        const double r = (p[axis] - s.bbox_min_[axis]) / span[axis] * s.grid_n_;
        return std::clamp(static_cast<int>(r), 0, s.grid_n_ - 1);
      };
      for (int j = cell(lo, 1); j <= cell(hi, 1); ++j)
        for (int i = cell(lo, 0); i <= cell(hi, 0); ++i)
          s.buckets_[static_cast<size_t>(j) * s.grid_n_ + i].push_back(t);
    }
  }
  return s;
}

namespace {

bool contains(const TriMesh& m, int t, const Eigen::Vector2d& p, double tol) {
  const auto& tri = m.triangles[t];
  const Eigen::Vector2d a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
  const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  const double l1 = ((p - a).x() * (c - a).y() - (p - a).y() * (c - a).x()) / det;
  const double l2 = ((b - a).x() * (p - a).y() - (b - a).y() * (p - a).x()) / det;
  return l1 >= -tol && l2 >= -tol && 1.0 - l1 - l2 >= -tol;
}

}  // namespace

int FeSpace::locate(const Eigen::Vector2d& p) const {
  const TriMesh& m = *mesh_;
  const double tol = 1e-9;
  if (use_buckets_) {
    const Eigen::Vector2d span = (bbox_max_ - bbox_min_).cwiseMax(1e-300);
    const auto cell = [&](int axis) {
      const double r = (p[axis] - bbox_min_[axis]) / span[axis] * grid_n_;
      return std::clamp(static_cast<int>(r), 0, grid_n_ - 1);
    };
    for (int t : buckets_[static_cast<size_t>(cell(1)) * grid_n_ + cell(0)])
      if (contains(m, t, p, tol)) return t;
  }
  for (int t = 0; t < m.n_triangles(); ++t)
    if (contains(m, t, p, tol)) return t;
  throw std::domain_error("FeSpace::locate: point outside domain");
}

FeFunction interpolate(const FeSpace& space, const ExactSolution& exact) {
  const TriMesh& m = space.mesh();
  const bool argyris = (space.kind() == ElementKind::Argyris5);
  if (argyris && !exact.hessian)
    throw std::invalid_argument("interpolate: Argyris requires second derivatives");
  FeFunction fn;
  fn.space = &space;
  fn.coeffs.resize(space.n_dofs());
  for (int v = 0; v < m.n_vertices(); ++v) {
    const Eigen::Vector2d p = m.vertices[v];
    fn.coeffs[space.vertex_dof(v, 0)] = exact.value(p);
    const Eigen::Vector2cd g = exact.gradient(p);
    fn.coeffs[space.vertex_dof(v, 1)] = g[0];
    fn.coeffs[space.vertex_dof(v, 2)] = g[1];
    if (argyris) {
      const Eigen::Matrix2cd H = exact.hessian(p);
      fn.coeffs[space.vertex_dof(v, 3)] = H(0, 0);
      fn.coeffs[space.vertex_dof(v, 4)] = H(0, 1);
      fn.coeffs[space.vertex_dof(v, 5)] = H(1, 1);
    }
  }
  for (int e = 0; e < m.n_edges(); ++e) {
    const Eigen::Vector2d n = m.edge_normal(e);
    const Eigen::Vector2cd g = exact.gradient(m.edge_midpoint(e));
    fn.coeffs[space.edge_dof(e)] = n.x() * g[0] + n.y() * g[1];
  }
  return fn;
}

Eigen::RowVectorXcd evaluate(const FeFunction& fn, const Eigen::Vector2d& p, int max_order) {
  const FeSpace& space = *fn.space;
  const int t = space.locate(p);
  const Eigen::MatrixXd table = space.element_basis(t).eval(p, max_order);
  const auto& dofs = space.cell_dofs(t);
  Eigen::RowVectorXcd out = Eigen::RowVectorXcd::Zero(table.cols());
  for (int i = 0; i < table.rows(); ++i) out += fn.coeffs[dofs[i]] * table.row(i);
  return out;
}

ExactSolution field_as_exact(const FeFunction& fn) {
  auto shared = std::make_shared<FeFunction>(fn);
  ExactSolution e;
  e.value = [shared](const Eigen::Vector2d& p) { return evaluate(*shared, p, 0)[0]; };
  e.gradient = [shared](const Eigen::Vector2d& p) {
    const auto row = evaluate(*shared, p, 1);
    return Eigen::Vector2cd(row[1], row[2]);
  };
  e.hessian = [shared](const Eigen::Vector2d& p) {
    const auto row = evaluate(*shared, p, 2);
    Eigen::Matrix2cd H;
    H << row[3], row[4], row[4], row[5];
    return H;
  };
  e.third = [shared](const Eigen::Vector2d& p) {
    const auto row = evaluate(*shared, p, 3);
    return Eigen::Vector4cd(row[6], row[7], row[8], row[9]);
  };
  return e;
}

namespace {

struct NormAccumulator {
  double l2 = 0, h1 = 0, h2 = 0;
  double boundary_l2 = 0;
  double boundary_grad_h = 0;       // sum h_F |grad u|^2
  double boundary_gradlap_h3 = 0;   // sum h_F^3 |grad(lap u)|^2
  double boundary_dirhess_h3 = 0;   // sum h_F^3 |grad(n'Hn u)|^2
};

Norms finalize(const NormAccumulator& a, const NormWeights& w) {
  Norms out;
  out.l2 = std::sqrt(a.l2);
  out.h1_semi = std::sqrt(a.h1);
  out.h2_semi = std::sqrt(a.h2);
  const double eps2 = a.h2 + a.h1 + w.epsilon * a.boundary_l2;
  out.eps_norm = std::sqrt(eps2);
  double heps2 = eps2 + w.epsilon * (a.boundary_gradlap_h3 + a.boundary_grad_h);
  if (w.include_director_term) heps2 += w.epsilon * a.boundary_dirhess_h3;
  out.h_eps_norm = std::sqrt(heps2);
  return out;
}

Norms norms_impl(const FeFunction& fn, const ExactSolution* exact, const NormWeights& w) {
  const FeSpace& space = *fn.space;
  const TriMesh& mesh = space.mesh();
  const int p = polynomial_degree(space.kind());
  const QuadratureRule vol_rule = triangle_rule(std::min(2 * p + 8, 20));
  const QuadratureRule edge = edge_rule(2 * p + 8);
  const bool boundary_terms = w.epsilon != 0.0;
  if (boundary_terms && exact && !exact->has_third())
    throw std::invalid_argument("compute_error_norms: exact third derivatives required");
  if (w.include_director_term && !w.director)
    throw std::invalid_argument("compute_norms: director required for the nematic norm term");

  NormAccumulator acc;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const PhysicalElementBasis& basis = space.element_basis(t);
    const auto& dofs = space.cell_dofs(t);
    for (int piece = 0; piece < basis.n_pieces; ++piece) {
      const auto& c = basis.piece_corner[piece];
      const double area2 =
          std::abs((c[1] - c[0]).x() * (c[2] - c[0]).y() - (c[1] - c[0]).y() * (c[2] - c[0]).x());
      for (int q = 0; q < vol_rule.size(); ++q) {
        const Eigen::Vector2d x = vol_rule.points(q, 0) * c[0] + vol_rule.points(q, 1) * c[1] +
                                  vol_rule.points(q, 2) * c[2];
        const double wq = vol_rule.weights[q] * 2.0 * 0.5 * area2;
        const Eigen::MatrixXd table = basis.eval_piece(piece, x, 2);
        Eigen::RowVectorXcd u = Eigen::RowVectorXcd::Zero(6);
        for (int i = 0; i < table.rows(); ++i) u += fn.coeffs[dofs[i]] * table.row(i);
        if (exact) {
          u[0] -= exact->value(x);
          const Eigen::Vector2cd g = exact->gradient(x);
          u[1] -= g[0];
          u[2] -= g[1];
          const Eigen::Matrix2cd H = exact->hessian(x);
          u[3] -= H(0, 0);
          u[4] -= H(0, 1);
          u[5] -= H(1, 1);
        }
        acc.l2 += wq * std::norm(u[0]);
        acc.h1 += wq * (std::norm(u[1]) + std::norm(u[2]));
        acc.h2 += wq * (std::norm(u[3]) + 2.0 * std::norm(u[4]) + std::norm(u[5]));
      }
    }
  }

  if (boundary_terms) {
    for (size_t f = 0; f < mesh.boundary_facets.size(); ++f) {
      const BoundaryFacet& facet = mesh.boundary_facets[f];
      const int t = facet.triangle;
      const PhysicalElementBasis& basis = space.element_basis(t);
      const auto& dofs = space.cell_dofs(t);
      const Eigen::Vector2d a = mesh.vertices[mesh.edges[facet.edge][0]];
      const Eigen::Vector2d b = mesh.vertices[mesh.edges[facet.edge][1]];
      const double hf = mesh.facet_length(static_cast<int>(f));
      const Eigen::Vector2d dir =
          w.include_director_term ? w.director(mesh.region_tags[t]) : Eigen::Vector2d(1, 0);
      for (int q = 0; q < edge.size(); ++q) {
        const Eigen::Vector2d x = a + edge.points(q, 0) * (b - a);
        const double wq = edge.weights[q] * hf;
        const Eigen::MatrixXd table = basis.eval(x, 3);
        Eigen::RowVectorXcd u = Eigen::RowVectorXcd::Zero(10);
        for (int i = 0; i < table.rows(); ++i) u += fn.coeffs[dofs[i]] * table.row(i);
        if (exact) {
          u[0] -= exact->value(x);
          const Eigen::Vector2cd g = exact->gradient(x);
          u[1] -= g[0];
          u[2] -= g[1];
          const Eigen::Matrix2cd H = exact->hessian(x);
          u[3] -= H(0, 0);
          u[4] -= H(0, 1);
          u[5] -= H(1, 1);
          const Eigen::Vector4cd t3 = exact->third(x);
          for (int j = 0; j < 4; ++j) u[6 + j] -= t3[j];
        }
        acc.boundary_l2 += wq * std::norm(u[0]);
        acc.boundary_grad_h += hf * wq * (std::norm(u[1]) + std::norm(u[2]));
        const Complex glx = u[6] + u[8], gly = u[7] + u[9];
        acc.boundary_gradlap_h3 += hf * hf * hf * wq * (std::norm(glx) + std::norm(gly));
        if (w.include_director_term) {
          const double nxx = dir.x() * dir.x(), nxy = 2.0 * dir.x() * dir.y(),
                       nyy = dir.y() * dir.y();
          const Complex dhx = nxx * u[6] + nxy * u[7] + nyy * u[8];
          const Complex dhy = nxx * u[7] + nxy * u[8] + nyy * u[9];
          acc.boundary_dirhess_h3 += hf * hf * hf * wq * (std::norm(dhx) + std::norm(dhy));
        }
      }
    }
  }
  return finalize(acc, w);
}

}  // namespace

Norms compute_norms(const FeFunction& fn, const NormWeights& weights) {
  return norms_impl(fn, nullptr, weights);
}

Norms compute_error_norms(const FeFunction& fn, const ExactSolution& exact,
                          const NormWeights& weights) {
  return norms_impl(fn, &exact, weights);
}

}  // namespace helkort
