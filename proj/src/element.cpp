// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/element.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "helkort/space.hpp"

namespace helkort {

namespace {

// Gradients of the barycentric coordinates of a triangle; constant vectors.
std::array<Eigen::Vector2d, 3> barycentric_gradients(const std::array<Eigen::Vector2d, 3>& c) {
  Eigen::Matrix2d jac;
  jac.col(0) = c[1] - c[0];
  jac.col(1) = c[2] - c[0];
  const Eigen::Matrix2d inv = jac.inverse();
  std::array<Eigen::Vector2d, 3> g;
  g[1] = inv.row(0);
  g[2] = inv.row(1);
  g[0] = -g[1] - g[2];
  return g;
}

Eigen::Vector3d barycentric(const std::array<Eigen::Vector2d, 3>& c, const Eigen::Vector2d& p) {
  const double det = (c[1] - c[0]).x() * (c[2] - c[0]).y() - (c[1] - c[0]).y() * (c[2] - c[0]).x();
  Eigen::Vector3d l;
  l[1] = ((p - c[0]).x() * (c[2] - c[0]).y() - (p - c[0]).y() * (c[2] - c[0]).x()) / det;
  l[2] = ((c[1] - c[0]).x() * (p - c[0]).y() - (c[1] - c[0]).y() * (p - c[0]).x()) / det;
  l[0] = 1.0 - l[1] - l[2];
  return l;
}

// Bernstein values of degree n at barycentric lam; entry (j,k) (powers of
// lam1, lam2) at poly::index(j,k).
template <typename Real>
Eigen::Vector<Real, Eigen::Dynamic> bernstein_values(int n, const Eigen::Vector3<Real>& lam) {
  Eigen::Vector<Real, Eigen::Dynamic> out(poly::count(n));
  std::vector<Real> p0(n + 1, Real(1)), p1(n + 1, Real(1)), p2(n + 1, Real(1)),
      fact(n + 1, Real(1));
  for (int i = 1; i <= n; ++i) {
    p0[i] = p0[i - 1] * lam[0];
    p1[i] = p1[i - 1] * lam[1];
    p2[i] = p2[i - 1] * lam[2];
    fact[i] = fact[i - 1] * i;
  }
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k + j <= n; ++k) {
      const int i = n - j - k;
      out[poly::index(j, k)] = fact[n] / (fact[i] * fact[j] * fact[k]) * p0[i] * p1[j] * p2[k];
    }
  return out;
}

// Index of (j,k) after lowering the a-th barycentric power, or -1.
inline int lowered(int n, int j, int k, int a) {
  const int i = n - j - k;
  if (a == 0) return i >= 1 ? poly::index(j, k) : -1;
  if (a == 1) return j >= 1 ? poly::index(j - 1, k) : -1;
  return k >= 1 ? poly::index(j, k - 1) : -1;
}

// All physical derivatives up to max_order of all Bernstein polynomials of
// degree n on the triangle with barycentric gradients g.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> bernstein_table_impl(
    int n, const Eigen::Vector3<Real>& lam, const std::array<Eigen::Vector2<Real>, 3>& g,
    int max_order) {
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Vector<Real, Eigen::Dynamic>;
  const int nm = poly::count(n);
  Mat table = Mat::Zero(nm, poly::deriv_cols(max_order));
  table.col(0) = bernstein_values<Real>(n, lam);
  if (max_order >= 1 && n >= 0) {
    const Vec b1 = n >= 1 ? bernstein_values<Real>(n - 1, lam) : Vec();
    const Vec b2 = n >= 2 ? bernstein_values<Real>(n - 2, lam) : Vec();
    const Vec b3 = n >= 3 ? bernstein_values<Real>(n - 3, lam) : Vec();
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k + j <= n; ++k) {
        const int m = poly::index(j, k);
        for (int a = 0; a < 3 && n >= 1; ++a) {
          const int ma = lowered(n, j, k, a);
          if (ma < 0) continue;
          const Real va = Real(n) * b1[ma];
          table(m, 1) += g[a].x() * va;
          table(m, 2) += g[a].y() * va;
          if (max_order < 2 || n < 2) continue;
          const int ja = a == 1 ? j - 1 : j, ka = a == 2 ? k - 1 : k;
          for (int b = 0; b < 3; ++b) {
            const int mb = lowered(n - 1, ja, ka, b);
            if (mb < 0) continue;
            const Real vab = Real(n) * Real(n - 1) * b2[mb];
            table(m, 3) += g[a].x() * g[b].x() * vab;
            table(m, 4) += g[a].x() * g[b].y() * vab;
            table(m, 5) += g[a].y() * g[b].y() * vab;
            if (max_order < 3 || n < 3) continue;
            const int jb = b == 1 ? ja - 1 : ja, kb = b == 2 ? ka - 1 : ka;
            for (int cdir = 0; cdir < 3; ++cdir) {
              const int mc = lowered(n - 2, jb, kb, cdir);
              if (mc < 0) continue;
              const Real vabc = Real(n) * Real(n - 1) * Real(n - 2) * b3[mc];
              table(m, 6) += g[a].x() * g[b].x() * g[cdir].x() * vabc;
              table(m, 7) += g[a].x() * g[b].x() * g[cdir].y() * vabc;
              table(m, 8) += g[a].x() * g[b].y() * g[cdir].y() * vabc;
              table(m, 9) += g[a].y() * g[b].y() * g[cdir].y() * vabc;
            }
          }
        }
      }
  }
  return table;
}

Eigen::MatrixXd bernstein_table(int n, const Eigen::Vector3d& lam,
                                const std::array<Eigen::Vector2d, 3>& g, int max_order) {
  return bernstein_table_impl<double>(n, lam, g, max_order);
}

}  // namespace

TriangleFrame triangle_frame(const TriMesh& mesh, int t) {
  TriangleFrame f;
  const auto& tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i) f.corner[i] = mesh.vertices[tri[i]];
  for (int i = 0; i < 3; ++i) f.edge_normal[i] = mesh.edge_normal(mesh.triangle_edges[t][i]);
  f.h = 0.0;
  for (int i = 0; i < 3; ++i)
    f.h = std::max(f.h, (f.corner[(i + 1) % 3] - f.corner[(i + 2) % 3]).norm());
  return f;
}

TriangleFrame make_frame(const std::array<Eigen::Vector2d, 3>& corners) {
  TriangleFrame f;
  f.corner = corners;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d t = (corners[(i + 2) % 3] - corners[(i + 1) % 3]).normalized();
    f.edge_normal[i] = {t.y(), -t.x()};
  }
  f.h = 0.0;
  for (int i = 0; i < 3; ++i)
    f.h = std::max(f.h, (f.corner[(i + 1) % 3] - f.corner[(i + 2) % 3]).norm());
  return f;
}

int DofFunctional::derivative_order() const {
  switch (kind) {
    case Kind::Value:
      return 0;
    case Kind::GradX:
    case Kind::GradY:
    case Kind::EdgeNormal:
      return 1;
    default:
      return 2;
  }
}

double DofFunctional::apply(const Eigen::RowVectorXd& d) const {
  switch (kind) {
    case Kind::Value:
      return d[0];
    case Kind::GradX:
      return d[1];
    case Kind::GradY:
      return d[2];
    case Kind::HessXX:
      return d[3];
    case Kind::HessXY:
      return d[4];
    case Kind::HessYY:
      return d[5];
    case Kind::EdgeNormal:
      return direction.x() * d[1] + direction.y() * d[2];
  }
  return 0.0;
}

std::vector<DofFunctional> local_dof_functionals(const TriangleFrame& frame, ElementKind kind) {
  using K = DofFunctional::Kind;
  std::vector<DofFunctional> dofs;
  const bool argyris = (kind == ElementKind::Argyris5);
  for (int v = 0; v < 3; ++v) {
    const Eigen::Vector2d p = frame.corner[v];
    dofs.push_back({K::Value, v, p, Eigen::Vector2d::Zero()});
    dofs.push_back({K::GradX, v, p, Eigen::Vector2d::Zero()});
    dofs.push_back({K::GradY, v, p, Eigen::Vector2d::Zero()});
    if (argyris) {
      dofs.push_back({K::HessXX, v, p, Eigen::Vector2d::Zero()});
      dofs.push_back({K::HessXY, v, p, Eigen::Vector2d::Zero()});
      dofs.push_back({K::HessYY, v, p, Eigen::Vector2d::Zero()});
    }
  }
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d mid = 0.5 * (frame.corner[(e + 1) % 3] + frame.corner[(e + 2) % 3]);
    dofs.push_back({K::EdgeNormal, e, mid, frame.edge_normal[e]});
  }
  return dofs;
}

namespace {

// Row of the dual matrix: the physical functional applied to every Bernstein
// polynomial of the owning piece.
Eigen::RowVectorXd functional_row(const DofFunctional& dof,
                                  const std::array<Eigen::Vector2d, 3>& corners,
                                  const std::array<Eigen::Vector2d, 3>& grads, int degree) {
  const Eigen::Vector3d lam = barycentric(corners, dof.point);
  const Eigen::MatrixXd table = bernstein_table(degree, lam, grads, dof.derivative_order());
  using K = DofFunctional::Kind;
  switch (dof.kind) {
    case K::Value:
      return table.col(0).transpose();
    case K::GradX:
      return table.col(1).transpose();
    case K::GradY:
      return table.col(2).transpose();
    case K::HessXX:
      return table.col(3).transpose();
    case K::HessXY:
      return table.col(4).transpose();
    case K::HessYY:
      return table.col(5).transpose();
    case K::EdgeNormal:
      return (dof.direction.x() * table.col(1) + dof.direction.y() * table.col(2)).transpose();
  }
  return {};
}

PhysicalElementBasis build_argyris(const TriangleFrame& frame) {
  PhysicalElementBasis basis;
  basis.kind = ElementKind::Argyris5;
  basis.n_pieces = 1;
  basis.piece_corner[0] = frame.corner;
  basis.piece_grad[0] = barycentric_gradients(frame.corner);

  const auto dofs = local_dof_functionals(frame, ElementKind::Argyris5);
  const int n = 21;
  Eigen::MatrixXd B(n, n);
  Eigen::VectorXd scaling(n);
  for (int i = 0; i < n; ++i) {
    scaling[i] = std::pow(frame.h, dofs[i].derivative_order());
    B.row(i) = scaling[i] * functional_row(dofs[i], frame.corner, basis.piece_grad[0], 5);
  }
  const Eigen::MatrixXd rhs = Eigen::MatrixXd(scaling.asDiagonal());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Eigen::MatrixXd A = lu.solve(rhs);
  A += lu.solve(rhs - B * A);  // one refinement pass tightens the duality
  const double residual = (B * A - rhs).cwiseAbs().maxCoeff();
  if (!(residual < 1e-8 * scaling.maxCoeff()))
    throw std::runtime_error("build_physical_basis: singular Argyris dual system");
  basis.coeffs.push_back(std::move(A));
  return basis;
}

PhysicalElementBasis build_hct(const TriangleFrame& frame) {
  PhysicalElementBasis basis;
  basis.kind = ElementKind::HCT3;
  const Eigen::Vector2d z = (frame.corner[0] + frame.corner[1] + frame.corner[2]) / 3.0;
  basis.n_pieces = 3;
  for (int i = 0; i < 3; ++i) {
    basis.piece_corner[i] = {frame.corner[(i + 1) % 3], frame.corner[(i + 2) % 3], z};
    basis.piece_grad[i] = barycentric_gradients(basis.piece_corner[i]);
  }

  const double h = frame.h;
  const int nm = poly::count(3);  // 10 Bernstein coefficients per cubic piece
  const int nu = 3 * nm;

  // C0/C1 constraints across the three internal edges z -- corner[i], shared
  // by pieces (i+1)%3 and (i+2)%3. A cubic trace needs 4 value matches, its
  // normal derivative (quadratic) needs 3.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(21, nu);
  int row = 0;
  for (int i = 0; i < 3; ++i) {
    const int plus = (i + 1) % 3, minus = (i + 2) % 3;
    const Eigen::Vector2d t = (frame.corner[i] - z).normalized();
    const Eigen::Vector2d nrm(t.y(), -t.x());
    const double value_s[4] = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    for (double s : value_s) {
      const Eigen::Vector2d p = z + s * (frame.corner[i] - z);
      for (int side = 0; side < 2; ++side) {
        const int piece = side == 0 ? plus : minus;
        const Eigen::Vector3d lam = barycentric(basis.piece_corner[piece], p);
        const double sign = side == 0 ? 1.0 : -1.0;
        C.block(row, nm * piece, 1, nm) = sign * bernstein_values(3, lam).transpose();
      }
      ++row;
    }
    const double normal_s[3] = {0.0, 0.5, 1.0};
    for (double s : normal_s) {
      const Eigen::Vector2d p = z + s * (frame.corner[i] - z);
      for (int side = 0; side < 2; ++side) {
        const int piece = side == 0 ? plus : minus;
        const Eigen::Vector3d lam = barycentric(basis.piece_corner[piece], p);
        const Eigen::MatrixXd tab = bernstein_table(3, lam, basis.piece_grad[piece], 1);
        const double sign = side == 0 ? h : -h;  // h keeps constraint rows O(1)
        C.block(row, nm * piece, 1, nm) =
            sign * (nrm.x() * tab.col(1) + nrm.y() * tab.col(2)).transpose();
      }
      ++row;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> clu(C);
  const Eigen::MatrixXd kernel = clu.kernel();
  if (kernel.cols() != 12)
    throw std::runtime_error("build_physical_basis: HCT constraint kernel has dimension " +
                             std::to_string(kernel.cols()) + ", expected 12");

  // DOF functionals applied to the kernel parametrization. Vertex i lives in
  // piece (i+1)%3; outer edge i lives in piece i.
  const auto dofs = local_dof_functionals(frame, ElementKind::HCT3);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(12, nu);
  Eigen::VectorXd scaling(12);
  for (int d = 0; d < 12; ++d) {
    const int piece = (dofs[d].kind == DofFunctional::Kind::EdgeNormal)
                          ? dofs[d].anchor
                          : (dofs[d].anchor + 1) % 3;
    scaling[d] = std::pow(h, dofs[d].derivative_order());
    B.block(d, nm * piece, 1, nm) =
        scaling[d] * functional_row(dofs[d], basis.piece_corner[piece], basis.piece_grad[piece], 3);
  }
  const Eigen::MatrixXd rhs = Eigen::MatrixXd(scaling.asDiagonal());
  const Eigen::MatrixXd Bred = B * kernel;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Bred);
  Eigen::MatrixXd Ared = lu.solve(rhs);
  Ared += lu.solve(rhs - Bred * Ared);
  const Eigen::MatrixXd full = kernel * Ared;  // nu x 12
  const double residual = (B * full - rhs).cwiseAbs().maxCoeff();
  if (!(residual < 1e-7 * scaling.maxCoeff()))
    throw std::runtime_error("build_physical_basis: singular HCT dual system");

  for (int p = 0; p < 3; ++p) basis.coeffs.push_back(full.middleRows(nm * p, nm));
  return basis;
}

}  // namespace

int PhysicalElementBasis::piece_at(const Eigen::Vector2d& p) const {
  int best = 0;
  double best_min = -1e30;
  for (int i = 0; i < n_pieces; ++i) {
    const Eigen::Vector3d l = barycentric(piece_corner[i], p);
    const double m = l.minCoeff();
    if (m > best_min) {
      best_min = m;
      best = i;
    }
  }
  if (best_min < -1e-9) throw std::domain_error("eval_basis: point outside triangle");
  return best;
}

Eigen::MatrixXd PhysicalElementBasis::eval(const Eigen::Vector2d& p, int max_order) const {
  return eval_piece(piece_at(p), p, max_order);
}

Eigen::MatrixXd PhysicalElementBasis::eval_piece(int piece, const Eigen::Vector2d& p,
                                                 int max_order) const {
  const Eigen::Vector3d lam = barycentric(piece_corner[piece], p);
  const Eigen::MatrixXd table = bernstein_table(degree(), lam, piece_grad[piece], max_order);
  return coeffs[piece].transpose() * table;
}

PhysicalElementBasis build_physical_basis(const TriangleFrame& frame, ElementKind kind) {
  const double area =
      0.5 * std::abs((frame.corner[1] - frame.corner[0]).x() * (frame.corner[2] - frame.corner[0]).y() -
                     (frame.corner[1] - frame.corner[0]).y() * (frame.corner[2] - frame.corner[0]).x());
  if (!(area > 1e-14 * frame.h * frame.h))
    throw std::invalid_argument("build_physical_basis: degenerate triangle");
  return kind == ElementKind::Argyris5 ? build_argyris(frame) : build_hct(frame);
}

double duality_defect(const PhysicalElementBasis& basis, const TriangleFrame& frame) {
  const auto dofs = local_dof_functionals(frame, basis.kind);
  const int n = basis.n_basis();
  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    const int piece = basis.n_pieces == 1 ? 0
                      : (dofs[i].kind == DofFunctional::Kind::EdgeNormal)
                          ? dofs[i].anchor
                          : (dofs[i].anchor + 1) % 3;
    const Eigen::Vector3d lam_d = barycentric(basis.piece_corner[piece], dofs[i].point);
    std::array<Eigen::Vector2<long double>, 3> grads;
    for (int a = 0; a < 3; ++a) grads[a] = basis.piece_grad[piece][a].cast<long double>();
    const auto table = bernstein_table_impl<long double>(
        basis.degree(), lam_d.cast<long double>(), grads, dofs[i].derivative_order());
    const auto coeffs = basis.coeffs[piece].cast<long double>().eval();
    for (int j = 0; j < n; ++j) {
      const Eigen::RowVector<long double, Eigen::Dynamic> row =
          coeffs.col(j).transpose() * table;
      Eigen::RowVectorXd row_d(row.size());
      for (int c = 0; c < row.size(); ++c) row_d[c] = static_cast<double>(row[c]);
      const double value = dofs[i].apply(row_d);
      defect = std::max(defect, std::abs(value - (i == j ? 1.0 : 0.0)));
    }
  }
  return defect;
}

ContinuityReport c1_continuity_check(const FeSpace& space, const Eigen::VectorXcd& coeffs,
                                     int samples_per_edge) {
  const TriMesh& mesh = space.mesh();
  ContinuityReport report;

  // interior mesh edges: adjacency from triangle_edges
  std::vector<std::array<int, 2>> adjacent(mesh.n_edges(), {-1, -1});
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      auto& a = adjacent[mesh.triangle_edges[t][i]];
      (a[0] < 0 ? a[0] : a[1]) = t;
    }

  auto track = [&report](const std::complex<double>& dv, const std::complex<double>& dn) {
    report.max_value_jump = std::max(report.max_value_jump, std::abs(dv));
    report.max_normal_jump = std::max(report.max_normal_jump, std::abs(dn));
  };

  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (adjacent[e][1] < 0) continue;
    const Eigen::Vector2d a = mesh.vertices[mesh.edges[e][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.edges[e][1]];
    const Eigen::Vector2d n = mesh.edge_normal(e);
    for (int s = 1; s <= samples_per_edge; ++s) {
      const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(s) / (samples_per_edge + 1));
      std::complex<double> value[2], normal[2];
      for (int side = 0; side < 2; ++side) {
        const int t = adjacent[e][side];
        const Eigen::MatrixXd table = space.element_basis(t).eval(p, 1);
        const auto& gd = space.cell_dofs(t);
        std::complex<double> u = 0.0, ux = 0.0, uy = 0.0;
        for (int i = 0; i < table.rows(); ++i) {
          const std::complex<double> c = coeffs[gd[i]];
          u += c * table(i, 0);
          ux += c * table(i, 1);
          uy += c * table(i, 2);
        }
        value[side] = u;
        normal[side] = n.x() * ux + n.y() * uy;
      }
      track(value[0] - value[1], normal[0] - normal[1]);
    }
  }

  if (space.kind() == ElementKind::HCT3) {
    // Alfeld-internal edges of each macro triangle.
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const PhysicalElementBasis& basis = space.element_basis(t);
      const auto& gd = space.cell_dofs(t);
      const Eigen::Vector2d z = basis.piece_corner[0][2];
      for (int i = 0; i < 3; ++i) {
        const int plus = (i + 1) % 3, minus = (i + 2) % 3;
        const Eigen::Vector2d vi = basis.piece_corner[plus][1];  // macro corner i
        const Eigen::Vector2d tdir = (vi - z).normalized();
        const Eigen::Vector2d n(tdir.y(), -tdir.x());
        for (int s = 1; s <= samples_per_edge; ++s) {
          const Eigen::Vector2d p = z + (vi - z) * (static_cast<double>(s) / (samples_per_edge + 1));
          std::complex<double> value[2], normal[2];
          const int pieces[2] = {plus, minus};
          for (int side = 0; side < 2; ++side) {
            const Eigen::MatrixXd table = basis.eval_piece(pieces[side], p, 1);
            std::complex<double> u = 0.0, ux = 0.0, uy = 0.0;
            for (int j = 0; j < table.rows(); ++j) {
              const std::complex<double> c = coeffs[gd[j]];
              u += c * table(j, 0);
              ux += c * table(j, 1);
              uy += c * table(j, 2);
            }
            value[side] = u;
            normal[side] = n.x() * ux + n.y() * uy;
          }
          track(value[0] - value[1], normal[0] - normal[1]);
        }
      }
    }
  }
  return report;
}

}  // namespace helkort
