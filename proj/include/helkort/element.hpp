// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <vector>

#include "helkort/mesh.hpp"

namespace helkort {

enum class ElementKind { Argyris5, HCT3 };

constexpr int local_dof_count(ElementKind kind) {
  return kind == ElementKind::Argyris5 ? 21 : 12;
}
constexpr int polynomial_degree(ElementKind kind) {
  return kind == ElementKind::Argyris5 ? 5 : 3;
}
/// Global DOFs attached to each mesh vertex (6 for Argyris, 3 for HCT).
constexpr int dofs_per_vertex(ElementKind kind) {
  return kind == ElementKind::Argyris5 ? 6 : 3;
}

// Triangular index bookkeeping shared by polynomial tables and derivative
// slots: entry (a,b) sits at (a+b)(a+b+1)/2 + b, so the derivative columns of
// an evaluation table are [v, dx, dy, dxx, dxy, dyy, dxxx, dxxy, dxyy, dyyy].
namespace poly {
constexpr int count(int degree) { return (degree + 1) * (degree + 2) / 2; }
constexpr int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }
constexpr int deriv_cols(int max_order) { return count(max_order); }
}  // namespace poly

/// Per-triangle geometry handed to the basis builder: corners in CCW order,
/// the globally oriented unit normal of each edge (edge i opposite corner i),
/// and the length scale h (longest edge).
struct TriangleFrame {
  std::array<Eigen::Vector2d, 3> corner;
  std::array<Eigen::Vector2d, 3> edge_normal;
  double h = 0.0;
};

TriangleFrame triangle_frame(const TriMesh& mesh, int t);
/// Frame with edge normals fixed by the local lower-index rule; for
/// single-element use where no global mesh is available.
TriangleFrame make_frame(const std::array<Eigen::Vector2d, 3>& corners);

/// A local degree of freedom as a point functional.
struct DofFunctional {
  enum class Kind { Value, GradX, GradY, HessXX, HessXY, HessYY, EdgeNormal };
  Kind kind;
  int anchor = -1;            ///< local vertex index, or local edge index for EdgeNormal
  Eigen::Vector2d point;      ///< evaluation point
  Eigen::Vector2d direction;  ///< unit edge normal (EdgeNormal only)

  int derivative_order() const;
  /// Applies the functional given the derivative row [v,dx,dy,dxx,dxy,dyy] at point.
  double apply(const Eigen::RowVectorXd& derivs) const;
};

/// Local DOF layout: vertex-major (value, gradient[, Hessian]) then the three
/// edge-normal derivatives at edge midpoints.
std::vector<DofFunctional> local_dof_functionals(const TriangleFrame& frame, ElementKind kind);

/// C1 basis on one (macro-)triangle, dual to the physical DOF functionals.
/// Each polynomial piece (one for Argyris, three Alfeld subtriangles for HCT,
/// piece i opposite corner i) is stored in the Bernstein basis of its own
/// subtriangle; that keeps coefficient growth small enough for the duality to
/// survive physical scales from 1e-2 to 1e2.
class PhysicalElementBasis {
 public:
  ElementKind kind = ElementKind::Argyris5;
  int n_pieces = 1;
  std::array<std::array<Eigen::Vector2d, 3>, 3> piece_corner;
  std::array<std::array<Eigen::Vector2d, 3>, 3> piece_grad;  ///< barycentric gradients
  std::vector<Eigen::MatrixXd> coeffs;  ///< per piece: Bernstein coefficients x n_basis

  int n_basis() const { return local_dof_count(kind); }
  int degree() const { return polynomial_degree(kind); }

  /// Sub-triangle owning p (HCT); 0 for Argyris. Throws std::domain_error if p
  /// lies outside the element (barycentric tolerance 1e-9).
  int piece_at(const Eigen::Vector2d& p) const;
  /// All local basis functions with physical-frame derivatives up to
  /// max_order (0..3); rows are basis functions, columns derivative slots.
  Eigen::MatrixXd eval(const Eigen::Vector2d& p, int max_order) const;
  Eigen::MatrixXd eval_piece(int piece, const Eigen::Vector2d& p, int max_order) const;
};

/// Solves the local dual (generalized Vandermonde) system in the physical
/// frame; derivative functional rows are scaled by powers of h for
/// conditioning. Throws on degenerate geometry or a singular local system.
PhysicalElementBasis build_physical_basis(const TriangleFrame& frame, ElementKind kind);

/// Max |functional_i(basis_j) - delta_ij|. The functionals are applied in
/// extended precision so the check measures the stored coefficients rather
/// than evaluation roundoff (second-derivative functionals on tiny triangles
/// cancel 1/h^2-sized terms).
double duality_defect(const PhysicalElementBasis& basis, const TriangleFrame& frame);

class FeSpace;

struct ContinuityReport {
  double max_value_jump = 0.0;
  double max_normal_jump = 0.0;
};

/// Max value / normal-derivative jumps of the coefficient field over all
/// interior mesh edges (and the Alfeld-internal edges for HCT), sampled at
/// samples_per_edge interior points.
ContinuityReport c1_continuity_check(const FeSpace& space,
                                     const Eigen::VectorXcd& coeffs,
                                     int samples_per_edge = 7);

}  // namespace helkort
