// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/forms.hpp"

#include <cmath>
#include <stdexcept>

#include "helkort/quadrature.hpp"

namespace helkort {

DirectorField DirectorField::uniform(const Eigen::Vector2d& n) {
  DirectorField d;
  d.set(0, n);
  return d;
}

DirectorField DirectorField::from_angle(double radians) {
  return uniform({std::cos(radians), std::sin(radians)});
}

void DirectorField::set(int tag, const Eigen::Vector2d& n) {
  const double len = n.norm();
  if (!(len > 0.0)) throw std::invalid_argument("DirectorField: zero director");
  regions[tag] = n / len;
}

const Eigen::Vector2d& DirectorField::at(int tag) const {
  auto it = regions.find(tag);
  if (it == regions.end())
    throw std::runtime_error("DirectorField: no director for region " + std::to_string(tag));
  return it->second;
}

void ProblemConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("ProblemConfig: alpha must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("ProblemConfig: beta must be nonnegative");
  if (!(k > 0.0)) throw std::invalid_argument("ProblemConfig: k must be positive");
  if (epsilon != -1 && epsilon != 0 && epsilon != 1)
    throw std::invalid_argument("ProblemConfig: epsilon must be 0 or 1");
  if (bc == BcKind::Impedance && resolved_theta() == 0.0)
    throw std::invalid_argument("ProblemConfig: impedance requires theta != 0");
  for (const auto& [tag, n] : director.regions)
    if (std::abs(n.norm() - 1.0) > 1e-14)
      throw std::invalid_argument("ProblemConfig: director must be a unit vector");
}

int ProblemConfig::resolved_epsilon() const {
  if (epsilon != -1) return epsilon;
  return bc == BcKind::Impedance ? 0 : 1;
}

double ProblemConfig::resolved_theta() const { return std::isnan(theta) ? k : theta; }

namespace {
double default_eta(ElementKind kind) { return kind == ElementKind::Argyris5 ? 3000.0 : 300.0; }
}  // namespace

double ProblemConfig::resolved_eta1(ElementKind kind) const {
  return eta1 >= 0.0 ? eta1 : default_eta(kind);
}
double ProblemConfig::resolved_eta2(ElementKind kind) const {
  return eta2 >= 0.0 ? eta2 : default_eta(kind);
}
double ProblemConfig::resolved_eta3(ElementKind kind) const {
  return eta3 >= 0.0 ? eta3 : default_eta(kind);
}

NormWeights ProblemConfig::norm_weights() const {
  NormWeights w;
  w.epsilon = static_cast<double>(resolved_epsilon());
  w.include_director_term = beta > 0.0;
  const DirectorField dir = director;
  w.director = [dir](int tag) { return dir.at(tag); };
  return w;
}

namespace {

// Boundary trace shorthands of all local basis functions at one point.
struct FacetTables {
  Eigen::VectorXd value, normal_deriv, laplacian, dir_hessian, normal_grad_laplacian,
      normal_grad_dir_hessian;
};

FacetTables facet_tables(const Eigen::MatrixXd& t, const Eigen::Vector2d& nu,
                         const Eigen::Vector2d& n) {
  FacetTables f;
  const double nxx = n.x() * n.x(), nxy = 2.0 * n.x() * n.y(), nyy = n.y() * n.y();
  f.value = t.col(0);
  f.normal_deriv = nu.x() * t.col(1) + nu.y() * t.col(2);
  f.laplacian = t.col(3) + t.col(5);
  f.dir_hessian = nxx * t.col(3) + nxy * t.col(4) + nyy * t.col(5);
  f.normal_grad_laplacian = nu.x() * (t.col(6) + t.col(8)) + nu.y() * (t.col(7) + t.col(9));
  f.normal_grad_dir_hessian = nu.x() * (nxx * t.col(6) + nxy * t.col(7) + nyy * t.col(8)) +
                              nu.y() * (nxx * t.col(7) + nxy * t.col(8) + nyy * t.col(9));
  return f;
}

struct FacetContext {
  Eigen::Vector2d nu;     // outward unit normal
  double h = 0.0;         // facet length
  int side_tag = -1;
  int region_tag = 0;     // region of the adjacent triangle
  Eigen::Vector2d point;  // current quadrature point
  double weight = 0.0;    // physical quadrature weight
};

// Runs `kernel(local, basis_table, ctx)` over all boundary facet quadrature
// points; the facet-local dense matrix is scattered afterwards.
template <typename Scalar, typename Kernel>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> assemble_facets(const FeSpace& space,
                                                             Kernel&& kernel) {
  const TriMesh& mesh = space.mesh();
  const int nd = local_dof_count(space.kind());
  const QuadratureRule rule = edge_rule(2 * polynomial_degree(space.kind()) + 4);
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(mesh.boundary_facets.size() * nd * nd);
  using Local = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  for (size_t f = 0; f < mesh.boundary_facets.size(); ++f) {
    const BoundaryFacet& facet = mesh.boundary_facets[f];
    const PhysicalElementBasis& basis = space.element_basis(facet.triangle);
    FacetContext ctx;
    ctx.nu = mesh.boundary_normal(static_cast<int>(f));
    ctx.h = mesh.facet_length(static_cast<int>(f));
    ctx.side_tag = facet.side_tag;
    ctx.region_tag = mesh.region_tags[facet.triangle];
    const Eigen::Vector2d a = mesh.vertices[mesh.edges[facet.edge][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.edges[facet.edge][1]];
    Local local = Local::Zero(nd, nd);
    for (int q = 0; q < rule.size(); ++q) {
      ctx.point = a + rule.points(q, 0) * (b - a);
      ctx.weight = rule.weights[q] * ctx.h;
      kernel(local, basis.eval(ctx.point, 3), ctx);
    }
    const auto& dofs = space.cell_dofs(facet.triangle);
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j)
        if (local(i, j) != Scalar(0)) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> out(space.n_dofs(), space.n_dofs());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// Runs `kernel(local, basis_table, weight, region_tag)` over all element
// quadrature points (per Alfeld piece for HCT).
template <typename Kernel>
SparseRealMatrix assemble_cells(const FeSpace& space, Kernel&& kernel) {
  const TriMesh& mesh = space.mesh();
  const int nd = local_dof_count(space.kind());
  const QuadratureRule rule = triangle_rule(2 * polynomial_degree(space.kind()) + 2);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.n_triangles()) * nd * nd);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const PhysicalElementBasis& basis = space.element_basis(t);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nd, nd);
    for (int piece = 0; piece < basis.n_pieces; ++piece) {
      const auto& c = basis.piece_corner[piece];
      const double area = 0.5 * std::abs((c[1] - c[0]).x() * (c[2] - c[0]).y() -
                                         (c[1] - c[0]).y() * (c[2] - c[0]).x());
      for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x =
            rule.points(q, 0) * c[0] + rule.points(q, 1) * c[1] + rule.points(q, 2) * c[2];
        kernel(local, basis.eval_piece(piece, x, 2), rule.weights[q] * 2.0 * area,
               mesh.region_tags[t]);
      }
    }
    const auto& dofs = space.cell_dofs(t);
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j)
        if (local(i, j) != 0.0) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  SparseRealMatrix out(space.n_dofs(), space.n_dofs());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

struct SoftParams {
  double alpha, beta, eta1, eta2, eta3, eps;
};
struct HardParams {
  double alpha, beta, eta, eps;
};
struct ImpedanceParams {
  double alpha, beta, theta;
};

SoftParams soft_params(const ProblemConfig& c, ElementKind kind, int eps) {
  return {c.alpha, c.beta, c.resolved_eta1(kind), c.resolved_eta2(kind), c.resolved_eta3(kind),
          static_cast<double>(eps)};
}
HardParams hard_params(const ProblemConfig& c, ElementKind kind, int eps) {
  return {c.alpha, c.beta, c.resolved_eta1(kind), static_cast<double>(eps)};
}
ImpedanceParams impedance_params(const ProblemConfig& c) {
  return {c.alpha, c.beta, c.resolved_theta()};
}

// Sound-soft Nitsche terms at one quadrature point, eps and signs included:
// eps (N_biharmonic - N_laplace + N_nematic + S + S_nematic).
void add_soft_terms(Eigen::MatrixXd& local, const FacetTables& f, const FacetContext& c,
                    const SoftParams& p) {
  if (p.eps == 0.0) return;
  const double h3 = c.h * c.h * c.h;
  const double pen = p.alpha * p.eta1 / h3 + p.eta2 / c.h + p.beta * p.eta3 / h3;
  const double w = p.eps * c.weight;
  local.noalias() += (w * p.alpha) * (f.value * f.normal_grad_laplacian.transpose() +
                                      f.normal_grad_laplacian * f.value.transpose());
  local.noalias() -=
      w * (f.value * f.normal_deriv.transpose() + f.normal_deriv * f.value.transpose());
  if (p.beta != 0.0)
    local.noalias() += (w * p.beta) * (f.value * f.normal_grad_dir_hessian.transpose() +
                                       f.normal_grad_dir_hessian * f.value.transpose());
  local.noalias() += (w * pen) * (f.value * f.value.transpose());
}

// Sound-hard variant: consistency terms pairing the flux trace with the
// normal derivative, their transposes, and the eta/h penalty on dn u.
void add_hard_terms(Eigen::MatrixXd& local, const FacetTables& f, const FacetContext& c,
                    const HardParams& p) {
  if (p.eps == 0.0) return;
  const double w = p.eps * c.weight;
  local.noalias() -= (w * p.alpha) * (f.normal_deriv * f.laplacian.transpose() +
                                      f.laplacian * f.normal_deriv.transpose());
  if (p.beta != 0.0)
    local.noalias() -= (w * p.beta) * (f.normal_deriv * f.dir_hessian.transpose() +
                                       f.dir_hessian * f.normal_deriv.transpose());
  local.noalias() += (w * p.eta / c.h) * (f.normal_deriv * f.normal_deriv.transpose());
}

void add_impedance_terms(Eigen::MatrixXcd& local, const FacetTables& f, const FacetContext& c,
                         const ImpedanceParams& p) {
  const Complex i_theta(0.0, p.theta);
  const double w = c.weight;
  Eigen::MatrixXd real_part = Eigen::MatrixXd::Zero(local.rows(), local.cols());
  Eigen::MatrixXd imag_part = Eigen::MatrixXd::Zero(local.rows(), local.cols());
  real_part.noalias() -= (w * p.alpha) * (f.normal_deriv * f.laplacian.transpose());
  imag_part.noalias() += (w * p.alpha * p.theta) * (f.value * f.laplacian.transpose());
  if (p.beta != 0.0) {
    imag_part.noalias() += (w * p.beta * p.theta) * (f.value * f.dir_hessian.transpose());
    real_part.noalias() -= (w * p.beta) * (f.normal_deriv * f.dir_hessian.transpose());
  }
  imag_part.noalias() -= (w * p.theta) * (f.value * f.value.transpose());
  local += real_part.cast<Complex>() + Complex(0.0, 1.0) * imag_part.cast<Complex>();
}

Eigen::Vector2d region_director(const ProblemConfig& config, double beta, int region) {
  return beta != 0.0 ? config.director.at(region) : Eigen::Vector2d(1.0, 0.0);
}

// Weight of the consistent impedance-residual penalties below.
constexpr double kImpedanceResidualWeight = 16.0;

// The literal conforming impedance form loses its discrete inf-sup under
// refinement: boundary-concentrated modes with large Hessian but small
// Laplacian and small lower-order content evade every term. These Hermitian
// penalties on the residuals of the two impedance conditions,
//   R1(u) = dn u - i theta u,
//   R2(u) = alpha dn(lap u) + beta dn(n'(Hu)n) - i theta (alpha lap u + beta n'(Hu)n),
// vanish for the exact solution, so consistency and the continuous problem
// are untouched while the runaway traces are pinned. Weights h and h^3/alpha
// make both terms absorbable by the volume energy via the inverse trace
// estimates.
void add_impedance_residual_penalty(Eigen::MatrixXcd& local, const FacetTables& f,
                                    const FacetContext& c, const ImpedanceParams& p) {
  const double theta = p.theta;
  const Eigen::VectorXd& r1_deriv = f.normal_deriv;  // R1 = r1_deriv - i theta value
  const Eigen::VectorXd& r1_value = f.value;
  const Eigen::VectorXd r2_deriv =
      p.alpha * f.normal_grad_laplacian + p.beta * f.normal_grad_dir_hessian;
  const Eigen::VectorXd r2_value = p.alpha * f.laplacian + p.beta * f.dir_hessian;

  const double w1 = kImpedanceResidualWeight * c.weight * c.h;
  const double w2 = kImpedanceResidualWeight * c.weight * c.h * c.h * c.h / p.alpha;
  Eigen::MatrixXd real_part =
      w1 * (r1_deriv * r1_deriv.transpose() + theta * theta * (r1_value * r1_value.transpose())) +
      w2 * (r2_deriv * r2_deriv.transpose() + theta * theta * (r2_value * r2_value.transpose()));
  Eigen::MatrixXd imag_part =
      (w1 * theta) * (r1_value * r1_deriv.transpose() - r1_deriv * r1_value.transpose()) +
      (w2 * theta) * (r2_value * r2_deriv.transpose() - r2_deriv * r2_value.transpose());
  local += real_part.cast<Complex>() + Complex(0.0, 1.0) * imag_part.cast<Complex>();
}

}  // namespace

SparseRealMatrix assemble_mass(const FeSpace& space) {
  return assemble_cells(space, [](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, double w, int) {
    local.noalias() += w * (t.col(0) * t.col(0).transpose());
  });
}

SparseRealMatrix assemble_volume_stiffness(const FeSpace& space, const ProblemConfig& config) {
  const double alpha = config.alpha, beta = config.beta;
  return assemble_cells(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, double w, int region) {
        const Eigen::VectorXd lap = t.col(3) + t.col(5);
        local.noalias() += (w * alpha) * (lap * lap.transpose());
        local.noalias() += w * (t.col(1) * t.col(1).transpose() + t.col(2) * t.col(2).transpose());
        if (beta != 0.0) {
          const Eigen::Vector2d n = config.director.at(region);
          const Eigen::VectorXd dh =
              n.x() * n.x() * t.col(3) + 2.0 * n.x() * n.y() * t.col(4) + n.y() * n.y() * t.col(5);
          local.noalias() += (w * beta) * (lap * dh.transpose());
        }
      });
}

SparseRealMatrix assemble_volume_forms(const FeSpace& space, const ProblemConfig& config) {
  SparseRealMatrix out = assemble_volume_stiffness(space, config);
  out -= SparseRealMatrix(config.k * config.k * assemble_mass(space));
  return out;
}

SparseRealMatrix assemble_nematic_block(const FeSpace& space, const ProblemConfig& config) {
  const double beta = config.beta;
  return assemble_cells(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, double w, int region) {
        const Eigen::Vector2d n = config.director.at(region);
        const Eigen::VectorXd lap = t.col(3) + t.col(5);
        const Eigen::VectorXd dh =
            n.x() * n.x() * t.col(3) + 2.0 * n.x() * n.y() * t.col(4) + n.y() * n.y() * t.col(5);
        local.noalias() += (w * beta) * (lap * dh.transpose());
      });
}

NitscheParts assemble_nitsche_parts(const FeSpace& space, const ProblemConfig& config) {
  const SoftParams p = soft_params(config, space.kind(), 1);
  NitscheParts parts;
  parts.biharmonic_consistency = assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        const FacetTables f = facet_tables(t, c.nu, region_director(config, p.beta, c.region_tag));
        local.noalias() += (c.weight * p.alpha) * (f.value * f.normal_grad_laplacian.transpose() +
                                                   f.normal_grad_laplacian * f.value.transpose());
      });
  parts.laplace_consistency = assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        const FacetTables f = facet_tables(t, c.nu, Eigen::Vector2d(1, 0));
        local.noalias() += c.weight * (f.value * f.normal_deriv.transpose() +
                                       f.normal_deriv * f.value.transpose());
      });
  parts.nematic_consistency = assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        if (p.beta == 0.0) return;
        const FacetTables f = facet_tables(t, c.nu, config.director.at(c.region_tag));
        local.noalias() += (c.weight * p.beta) * (f.value * f.normal_grad_dir_hessian.transpose() +
                                                  f.normal_grad_dir_hessian * f.value.transpose());
      });
  parts.penalty = assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        const double coeff = p.alpha * p.eta1 / (c.h * c.h * c.h) + p.eta2 / c.h;
        local.noalias() += (c.weight * coeff) * (t.col(0) * t.col(0).transpose());
      });
  parts.nematic_penalty = assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        if (p.beta == 0.0) return;
        const double coeff = p.beta * p.eta3 / (c.h * c.h * c.h);
        local.noalias() += (c.weight * coeff) * (t.col(0) * t.col(0).transpose());
      });
  return parts;
}

SparseRealMatrix assemble_nitsche_terms(const FeSpace& space, const ProblemConfig& config) {
  const int eps = config.resolved_epsilon();
  if (config.bc == BcKind::SoundHard) {
    const HardParams p = hard_params(config, space.kind(), eps);
    return assemble_facets<double>(
        space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
          add_hard_terms(local, facet_tables(t, c.nu, region_director(config, p.beta, c.region_tag)),
                         c, p);
        });
  }
  const SoftParams p = soft_params(config, space.kind(), eps);
  return assemble_facets<double>(
      space, [&](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        add_soft_terms(local, facet_tables(t, c.nu, region_director(config, p.beta, c.region_tag)),
                       c, p);
      });
}

SparseComplexMatrix assemble_impedance_terms(const FeSpace& space, const ProblemConfig& config) {
  if (config.resolved_theta() == 0.0)
    throw std::invalid_argument("assemble_impedance_terms: theta must be nonzero");
  const ImpedanceParams p = impedance_params(config);
  return assemble_facets<Complex>(
      space, [&](Eigen::MatrixXcd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        add_impedance_terms(local, facet_tables(t, c.nu, region_director(config, p.beta, c.region_tag)),
                            c, p);
      });
}

std::vector<int> constrained_kept_dofs(const FeSpace& space, BoundaryConstraint constraint) {
  const TriMesh& mesh = space.mesh();
  std::vector<bool> remove(space.n_dofs(), false);
  if (constraint != BoundaryConstraint::None) {
    // tangent axes of the boundary edges meeting at each boundary vertex
    std::vector<std::array<bool, 2>> tangent(mesh.n_vertices(), {false, false});
    for (const BoundaryFacet& f : mesh.boundary_facets) {
      const Eigen::Vector2d t = mesh.edge_tangent(f.edge);
      int axis;
      if (std::abs(t.x()) > 1.0 - 1e-12)
        axis = 0;
      else if (std::abs(t.y()) > 1.0 - 1e-12)
        axis = 1;
      else
        throw std::runtime_error(
            "constrained_kept_dofs: boundary edges must be axis-aligned for the constrained "
            "eigenvalue space");
      tangent[mesh.edges[f.edge][0]][axis] = true;
      tangent[mesh.edges[f.edge][1]][axis] = true;
    }
    const bool argyris = (space.kind() == ElementKind::Argyris5);
    const bool with_gradient = (constraint == BoundaryConstraint::ValueAndGradient);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (!space.vertex_on_boundary(v)) continue;
      const bool tx = tangent[v][0], ty = tangent[v][1];
      remove[space.vertex_dof(v, 0)] = true;
      if (with_gradient) {
        remove[space.vertex_dof(v, 1)] = true;
        remove[space.vertex_dof(v, 2)] = true;
        if (argyris) {
          remove[space.vertex_dof(v, 4)] = true;  // tangential-normal second derivative
          if (tx) remove[space.vertex_dof(v, 3)] = true;
          if (ty) remove[space.vertex_dof(v, 5)] = true;
        }
      } else {
        if (tx) remove[space.vertex_dof(v, 1)] = true;
        if (ty) remove[space.vertex_dof(v, 2)] = true;
        if (argyris) {
          if (tx) remove[space.vertex_dof(v, 3)] = true;
          if (ty) remove[space.vertex_dof(v, 5)] = true;
        }
      }
    }
    if (with_gradient)
      for (int e = 0; e < mesh.n_edges(); ++e)
        if (space.edge_on_boundary(e)) remove[space.edge_dof(e)] = true;
  }
  std::vector<int> kept;
  kept.reserve(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i)
    if (!remove[i]) kept.push_back(i);
  return kept;
}

SparseRealMatrix restrict_to(const SparseRealMatrix& A, const std::vector<int>& kept) {
  std::vector<int> position(A.rows(), -1);
  for (size_t i = 0; i < kept.size(); ++i) position[kept[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(A.nonZeros());
  for (int r = 0; r < A.outerSize(); ++r) {
    if (position[r] < 0) continue;
    for (SparseRealMatrix::InnerIterator it(A, r); it; ++it)
      if (position[it.col()] >= 0) triplets.emplace_back(position[r], position[it.col()], it.value());
  }
  SparseRealMatrix out(static_cast<int>(kept.size()), static_cast<int>(kept.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd expand_from(const Eigen::VectorXd& constrained, const std::vector<int>& kept,
                            int full_size) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(full_size);
  for (size_t i = 0; i < kept.size(); ++i) out[kept[i]] = constrained[i];
  return out;
}

EvpPair assemble_evp_pair(const FeSpace& space, const ProblemConfig& config) {
  config.validate();
  EvpPair pair;
  SparseRealMatrix raw = assemble_volume_stiffness(space, config);
  if (config.resolved_epsilon() == 1) raw += assemble_nitsche_terms(space, config);
  SparseRealMatrix mass = assemble_mass(space);

  if (config.resolved_epsilon() == 0) {
    pair.kept_dofs = constrained_kept_dofs(space, BoundaryConstraint::Value);
    if (pair.kept_dofs.empty())
      throw std::runtime_error("assemble_evp_pair: empty constrained space");
    raw = restrict_to(raw, pair.kept_dofs);
    mass = restrict_to(mass, pair.kept_dofs);
  } else {
    pair.kept_dofs.resize(space.n_dofs());
    for (int i = 0; i < space.n_dofs(); ++i) pair.kept_dofs[i] = i;
  }
  pair.symmetry_defect = symmetry_defect(raw);
  pair.stiffness = SparseRealMatrix(0.5 * (raw + SparseRealMatrix(raw.transpose())));
  pair.mass = std::move(mass);
  return pair;
}

namespace {

// Boundary data terms making the discrete problem consistent with `data`,
// added for facets whose side tag matches `side_filter` (-1: all facets).
void add_boundary_data_terms(const FeSpace& space, const ProblemConfig& config, BcKind bc, int eps,
                             const ExactSolution& data, int side_filter, Eigen::VectorXcd& b) {
  if (bc == BcKind::SoundSoft && eps != 1)
    throw std::invalid_argument("assemble_rhs: sound-soft data terms require the Nitsche path");
  if ((bc == BcKind::Impedance || bc == BcKind::SoundHard) && !data.has_third())
    throw std::invalid_argument("assemble_rhs: boundary data requires third derivatives");

  const TriMesh& mesh = space.mesh();
  const ElementKind kind = space.kind();
  const double alpha = config.alpha, beta = config.beta;
  const double theta = config.resolved_theta();
  const QuadratureRule rule = edge_rule(2 * polynomial_degree(kind) + 4);

  for (size_t fi = 0; fi < mesh.boundary_facets.size(); ++fi) {
    const BoundaryFacet& facet = mesh.boundary_facets[fi];
    if (side_filter >= 0 && facet.side_tag != side_filter) continue;
    const PhysicalElementBasis& basis = space.element_basis(facet.triangle);
    const auto& dofs = space.cell_dofs(facet.triangle);
    const Eigen::Vector2d nu = mesh.boundary_normal(static_cast<int>(fi));
    const Eigen::Vector2d n = region_director(config, beta, mesh.region_tags[facet.triangle]);
    const double h = mesh.facet_length(static_cast<int>(fi));
    const Eigen::Vector2d a = mesh.vertices[mesh.edges[facet.edge][0]];
    const Eigen::Vector2d pb = mesh.vertices[mesh.edges[facet.edge][1]];
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = a + rule.points(q, 0) * (pb - a);
      const double w = rule.weights[q] * h;
      const FacetTables f = facet_tables(basis.eval(x, 3), nu, n);
      const Complex g = data.value(x);
      const Complex lap = data.laplacian(x);
      const Complex dh = beta != 0.0 ? data.director_hessian(x, n) : Complex(0.0);
      if (bc == BcKind::SoundSoft) {
        const Complex flux = alpha * lap + beta * dh;
        const double h3 = h * h * h;
        const double pen = alpha * config.resolved_eta1(kind) / h3 +
                           config.resolved_eta2(kind) / h + beta * config.resolved_eta3(kind) / h3;
        for (int i = 0; i < f.value.size(); ++i)
          b[dofs[i]] += w * (flux * f.normal_deriv[i] + alpha * g * f.normal_grad_laplacian[i] +
                             beta * g * f.normal_grad_dir_hessian[i] - g * f.normal_deriv[i] +
                             pen * g * f.value[i]);
      } else if (bc == BcKind::Impedance) {
        const Eigen::Vector2cd grad = data.gradient(x);
        const Complex dn_u = nu.x() * grad[0] + nu.y() * grad[1];
        const Eigen::Vector2cd grad_lap = data.grad_laplacian(x);
        const Eigen::Vector2cd grad_dh =
            beta != 0.0 ? data.grad_director_hessian(x, n) : Eigen::Vector2cd::Zero().eval();
        const Complex g1 = dn_u - Complex(0.0, theta) * g;
        const Complex g2 = alpha * (nu.x() * grad_lap[0] + nu.y() * grad_lap[1]) +
                           beta * (nu.x() * grad_dh[0] + nu.y() * grad_dh[1]) -
                           Complex(0.0, theta) * (alpha * lap + beta * dh);
        // data halves of the consistent residual penalties
        const double w1 = kImpedanceResidualWeight * w * h;
        const double w2 = kImpedanceResidualWeight * w * h * h * h / alpha;
        const Complex i_theta(0.0, theta);
        for (int i = 0; i < f.value.size(); ++i) {
          const Complex r1_i = f.normal_deriv[i] + i_theta * f.value[i];
          const Complex r2_i =
              alpha * f.normal_grad_laplacian[i] + beta * f.normal_grad_dir_hessian[i] +
              i_theta * (alpha * f.laplacian[i] + beta * f.dir_hessian[i]);
          b[dofs[i]] += w * (g1 - g2) * f.value[i] + w1 * g1 * r1_i + w2 * g2 * r2_i;
        }
      } else {
        const Eigen::Vector2cd grad = data.gradient(x);
        const Complex gn = nu.x() * grad[0] + nu.y() * grad[1];
        const Eigen::Vector2cd grad_lap = data.grad_laplacian(x);
        const Eigen::Vector2cd grad_dh =
            beta != 0.0 ? data.grad_director_hessian(x, n) : Eigen::Vector2cd::Zero().eval();
        const Complex gw = alpha * (nu.x() * grad_lap[0] + nu.y() * grad_lap[1]) +
                           beta * (nu.x() * grad_dh[0] + nu.y() * grad_dh[1]);
        const double eta = config.resolved_eta1(kind);
        for (int i = 0; i < f.value.size(); ++i)
          b[dofs[i]] +=
              w * ((gn - gw) * f.value[i] - gn * (alpha * f.laplacian[i] + beta * f.dir_hessian[i]) +
                   eta / h * gn * f.normal_deriv[i]);
      }
    }
  }
}

}  // namespace

Eigen::VectorXcd assemble_rhs(const FeSpace& space, const ProblemConfig& config,
                              const ScalarField& forcing, const ExactSolution* data) {
  config.validate();
  const TriMesh& mesh = space.mesh();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(space.n_dofs());

  if (forcing) {
    const int p = polynomial_degree(space.kind());
    const QuadratureRule rule = triangle_rule(std::min(2 * p + 10, 20));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const PhysicalElementBasis& basis = space.element_basis(t);
      const auto& dofs = space.cell_dofs(t);
      for (int piece = 0; piece < basis.n_pieces; ++piece) {
        const auto& c = basis.piece_corner[piece];
        const double area = 0.5 * std::abs((c[1] - c[0]).x() * (c[2] - c[0]).y() -
                                           (c[1] - c[0]).y() * (c[2] - c[0]).x());
        for (int q = 0; q < rule.size(); ++q) {
          const Eigen::Vector2d x =
              rule.points(q, 0) * c[0] + rule.points(q, 1) * c[1] + rule.points(q, 2) * c[2];
          const Complex fw = forcing(x) * rule.weights[q] * 2.0 * area;
          const Eigen::MatrixXd table = basis.eval_piece(piece, x, 0);
          for (int i = 0; i < table.rows(); ++i) b[dofs[i]] += fw * table(i, 0);
        }
      }
    }
  }

  if (data)
    add_boundary_data_terms(space, config, config.bc, config.resolved_epsilon(), *data, -1, b);
  return b;
}

AssembledSystem assemble_system(const FeSpace& space, const ProblemConfig& config,
                                const ScalarField& forcing, const ExactSolution* data) {
  config.validate();
  AssembledSystem sys;
  sys.space = &space;
  sys.config = config;
  SparseRealMatrix real = assemble_volume_forms(space, config);
  if (config.bc != BcKind::Impedance) real += assemble_nitsche_terms(space, config);
  sys.matrix = real.cast<Complex>();
  if (config.bc == BcKind::Impedance) {
    sys.matrix += assemble_impedance_terms(space, config);
    const ImpedanceParams p = impedance_params(config);
    sys.matrix += assemble_facets<Complex>(
        space, [&](Eigen::MatrixXcd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
          add_impedance_residual_penalty(
              local, facet_tables(t, c.nu, region_director(config, p.beta, c.region_tag)), c, p);
        });
  }
  sys.rhs = assemble_rhs(space, config, forcing, data);
  return sys;
}

AssembledSystem assemble_mixed_system(const FeSpace& space, const ProblemConfig& config,
                                      const std::map<int, SideBc>& side_bcs,
                                      const ScalarField& forcing) {
  config.validate();
  const ElementKind kind = space.kind();
  auto side_of = [&side_bcs](int tag) -> const SideBc& {
    auto it = side_bcs.find(tag);
    if (it == side_bcs.end())
      throw std::runtime_error("assemble_mixed_system: no boundary condition for side " +
                               std::to_string(tag));
    return it->second;
  };

  const SoftParams soft = soft_params(config, kind, 1);
  const HardParams hard = hard_params(config, kind, 1);
  const ImpedanceParams imp = impedance_params(config);

  AssembledSystem sys;
  sys.space = &space;
  sys.config = config;
  sys.matrix = assemble_volume_forms(space, config).cast<Complex>();
  sys.matrix += assemble_facets<Complex>(
      space, [&](Eigen::MatrixXcd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        const SideBc& side = side_of(c.side_tag);
        const FacetTables f =
            facet_tables(t, c.nu, region_director(config, config.beta, c.region_tag));
        if (side.bc == BcKind::Impedance) {
          add_impedance_terms(local, f, c, imp);
          add_impedance_residual_penalty(local, f, c, imp);
        } else {
          Eigen::MatrixXd real_local = Eigen::MatrixXd::Zero(local.rows(), local.cols());
          if (side.bc == BcKind::SoundSoft)
            add_soft_terms(real_local, f, c, soft);
          else
            add_hard_terms(real_local, f, c, hard);
          local += real_local.cast<Complex>();
        }
      });

  sys.rhs = forcing ? assemble_rhs(space, config, forcing, nullptr)
                    : Eigen::VectorXcd::Zero(space.n_dofs());
  for (const auto& [tag, side] : side_bcs) {
    if (!side.data) continue;
    add_boundary_data_terms(space, config, side.bc, 1, *side.data, tag, sys.rhs);
  }
  return sys;
}

SparseRealMatrix assemble_h1_semi_gram(const FeSpace& space) {
  return assemble_cells(space, [](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, double w, int) {
    local.noalias() += w * (t.col(1) * t.col(1).transpose() + t.col(2) * t.col(2).transpose());
  });
}

SparseRealMatrix assemble_h2_semi_gram(const FeSpace& space) {
  return assemble_cells(space, [](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, double w, int) {
    local.noalias() += w * (t.col(3) * t.col(3).transpose() +
                            2.0 * (t.col(4) * t.col(4).transpose()) +
                            t.col(5) * t.col(5).transpose());
  });
}

SparseRealMatrix assemble_boundary_mass(const FeSpace& space) {
  return assemble_facets<double>(
      space, [](Eigen::MatrixXd& local, const Eigen::MatrixXd& t, const FacetContext& c) {
        local.noalias() += c.weight * (t.col(0) * t.col(0).transpose());
      });
}

SparseRealMatrix assemble_eps_gram(const FeSpace& space, double epsilon) {
  SparseRealMatrix out = assemble_h2_semi_gram(space);
  out += assemble_h1_semi_gram(space);
  if (epsilon != 0.0) out += SparseRealMatrix(epsilon * assemble_boundary_mass(space));
  return out;
}

}  // namespace helkort
