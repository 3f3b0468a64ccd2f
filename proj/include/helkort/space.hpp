// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "helkort/element.hpp"
#include "helkort/mesh.hpp"

namespace helkort {

using Complex = std::complex<double>;

/// Closed-form field with derivatives, used for interpolation targets,
/// manufactured data and error integrands.
struct ExactSolution {
  std::function<Complex(const Eigen::Vector2d&)> value;
  std::function<Eigen::Vector2cd(const Eigen::Vector2d&)> gradient;
  std::function<Eigen::Matrix2cd(const Eigen::Vector2d&)> hessian;
  /// Third derivatives (uxxx, uxxy, uxyy, uyyy); optional. Needed for
  /// impedance data terms and boundary third-derivative norms.
  std::function<Eigen::Vector4cd(const Eigen::Vector2d&)> third;

  bool has_third() const { return static_cast<bool>(third); }
  Complex laplacian(const Eigen::Vector2d& p) const;
  Eigen::Vector2cd grad_laplacian(const Eigen::Vector2d& p) const;
  /// n' (Hessian u) n for a unit director n.
  Complex director_hessian(const Eigen::Vector2d& p, const Eigen::Vector2d& n) const;
  Eigen::Vector2cd grad_director_hessian(const Eigen::Vector2d& p, const Eigen::Vector2d& n) const;

  /// Central finite-difference consistency of gradient and Hessian against
  /// value; throws std::runtime_error if the relative defect exceeds tol.
  void self_test(const std::vector<Eigen::Vector2d>& points, double step = 1e-5,
                 double rel_tol = 1e-6) const;
};

/// Global C1 finite element space: deterministic numbering with all vertex
/// DOFs first (value, gradient[, Hessian] per vertex), then one normal
/// derivative DOF per edge. Immutable after construction.
class FeSpace {
 public:
  static FeSpace build(std::shared_ptr<const TriMesh> mesh, ElementKind kind);

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  ElementKind kind() const { return kind_; }
  int n_dofs() const { return n_dofs_; }

  const std::vector<int>& cell_dofs(int t) const { return cell_dofs_[t]; }
  const PhysicalElementBasis& element_basis(int t) const { return basis_[t]; }

  int vertex_dof(int v, int comp) const { return dofs_per_vertex(kind_) * v + comp; }
  int edge_dof(int e) const { return dofs_per_vertex(kind_) * mesh_->n_vertices() + e; }
  bool vertex_on_boundary(int v) const { return vertex_on_boundary_[v]; }
  bool edge_on_boundary(int e) const { return edge_on_boundary_[e]; }

  /// Triangle containing p; throws std::domain_error if p is outside.
  int locate(const Eigen::Vector2d& p) const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  ElementKind kind_ = ElementKind::Argyris5;
  int n_dofs_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<PhysicalElementBasis> basis_;
  std::vector<bool> vertex_on_boundary_;
  std::vector<bool> edge_on_boundary_;
  // uniform-grid bucket index, used above the brute-force threshold
  bool use_buckets_ = false;
  int grid_n_ = 0;
  Eigen::Vector2d bbox_min_, bbox_max_;
  std::vector<std::vector<int>> buckets_;
};

/// Coefficient vector over a space.
struct FeFunction {
  const FeSpace* space = nullptr;
  Eigen::VectorXcd coeffs;
};

/// Applies the DOF functionals of the space to the exact field.
FeFunction interpolate(const FeSpace& space, const ExactSolution& exact);

/// Value and derivatives up to max_order (0..3) at p, as the derivative row
/// [v, dx, dy, dxx, dxy, dyy, ...]. Throws if p is outside the domain.
Eigen::RowVectorXcd evaluate(const FeFunction& fn, const Eigen::Vector2d& p, int max_order);

/// Wraps a finite element field as an ExactSolution (shares the coefficients).
ExactSolution field_as_exact(const FeFunction& fn);

struct Norms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h2_semi = 0.0;
  double eps_norm = 0.0;    ///< (H2-semi^2 + H1-semi^2 + eps*boundary L2^2)^(1/2)
  double h_eps_norm = 0.0;  ///< eps_norm plus the mesh-weighted boundary derivative terms
};

/// Parameters entering the mesh-dependent norms.
struct NormWeights {
  double epsilon = 1.0;
  bool include_director_term = false;  ///< boundary |grad(n'(Hu)n)|^2 term (nematic runs)
  std::function<Eigen::Vector2d(int)> director;  ///< by region tag
};

Norms compute_norms(const FeFunction& fn, const NormWeights& weights);
/// Norms of (fn - exact); exact must provide third derivatives when the
/// epsilon-weighted boundary terms are active.
Norms compute_error_norms(const FeFunction& fn, const ExactSolution& exact,
                          const NormWeights& weights);

}  // namespace helkort
