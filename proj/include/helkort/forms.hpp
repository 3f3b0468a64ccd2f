// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "helkort/linalg.hpp"
#include "helkort/space.hpp"

namespace helkort {

enum class BcKind { SoundSoft, SoundHard, Impedance };

/// Piecewise-constant unit director, one vector per mesh region tag.
struct DirectorField {
  std::map<int, Eigen::Vector2d> regions;

  static DirectorField uniform(const Eigen::Vector2d& n);
  static DirectorField from_angle(double radians);
  /// Normalizes n; throws on a zero vector.
  void set(int tag, const Eigen::Vector2d& n);
  /// Throws std::runtime_error when the region has no director.
  const Eigen::Vector2d& at(int tag) const;
};

/// All scalar parameters of the boundary value problem plus the director.
struct ProblemConfig {
  double alpha = 1e-2;  ///< Korteweg coefficient, > 0
  double beta = 0.0;    ///< nematic coefficient, >= 0
  double k = 10.0;      ///< wave number, > 0
  /// Impedance parameter, real and nonzero; NaN (default) resolves to k.
  double theta = std::numeric_limits<double>::quiet_NaN();
  BcKind bc = BcKind::SoundSoft;
  /// Nitsche switch; -1 resolves by boundary condition (1 for sound-soft and
  /// sound-hard, 0 for impedance). Only 0/1 are meaningful.
  int epsilon = -1;
  /// Penalty parameters; negative values resolve to the per-element default
  /// (3000 for Argyris, 300 for HCT). The defaults sit about 2x above the
  /// sharp inverse-trace thresholds of the quintic/cubic traces, measured by
  /// the executable coercivity check (all eigenvalues of the Nitsche
  /// eigenvalue form positive).
  double eta1 = -1.0, eta2 = -1.0, eta3 = -1.0;
  DirectorField director = DirectorField::uniform({1.0, 0.0});

  void validate() const;
  int resolved_epsilon() const;
  double resolved_theta() const;
  double resolved_eta1(ElementKind kind) const;
  double resolved_eta2(ElementKind kind) const;
  double resolved_eta3(ElementKind kind) const;
  NormWeights norm_weights() const;
};

using ScalarField = std::function<Complex(const Eigen::Vector2d&)>;

// --- volume forms ---------------------------------------------------------

SparseRealMatrix assemble_mass(const FeSpace& space);
/// alpha (lap u, lap v) + beta (n'(Hu)n, lap v) + (grad u, grad v).
SparseRealMatrix assemble_volume_stiffness(const FeSpace& space, const ProblemConfig& config);
/// Volume stiffness minus k^2 times the mass form.
SparseRealMatrix assemble_volume_forms(const FeSpace& space, const ProblemConfig& config);
/// The nematic coupling beta (n'(Hu)n, lap v) alone.
SparseRealMatrix assemble_nematic_block(const FeSpace& space, const ProblemConfig& config);

// --- boundary forms -------------------------------------------------------

/// The individual sound-soft Nitsche matrices, without the epsilon factor and
/// sign pattern; penalties use the facet-local h.
struct NitscheParts {
  SparseRealMatrix biharmonic_consistency;  ///< alpha[(grad lap u . nu, v) + (u, grad lap v . nu)]
  SparseRealMatrix laplace_consistency;     ///< (grad u . nu, v) + (u, grad v . nu)
  SparseRealMatrix nematic_consistency;     ///< beta[(grad(n'Hu n) . nu, v) + sym]
  SparseRealMatrix penalty;                 ///< alpha eta1/h^3 (u,v) + eta2/h (u,v)
  SparseRealMatrix nematic_penalty;         ///< beta eta3/h^3 (u,v)
};
NitscheParts assemble_nitsche_parts(const FeSpace& space, const ProblemConfig& config);

/// Sound-soft: eps (N_biharmonic - N_laplace + N_nematic + S + S_nematic).
/// Sound-hard: the normal-derivative variant, symmetric and consistent:
///   -alpha(lap u, dn v) - beta(n'Hu n, dn v) - (sym) + eta1/h (dn u, dn v).
SparseRealMatrix assemble_nitsche_terms(const FeSpace& space, const ProblemConfig& config);

/// The impedance boundary terms (genuinely complex). Throws if theta == 0.
SparseComplexMatrix assemble_impedance_terms(const FeSpace& space, const ProblemConfig& config);

// --- constrained subspaces ------------------------------------------------

enum class BoundaryConstraint {
  None,
  Value,             ///< u = 0 on the boundary
  ValueAndGradient,  ///< u = 0 and grad u = 0 on the boundary
};

/// Global DOFs spanning the constrained subspace, ascending. Requires
/// axis-aligned boundary edges (satisfied by the unit-square family).
std::vector<int> constrained_kept_dofs(const FeSpace& space, BoundaryConstraint constraint);
SparseRealMatrix restrict_to(const SparseRealMatrix& A, const std::vector<int>& kept);
Eigen::VectorXd expand_from(const Eigen::VectorXd& constrained, const std::vector<int>& kept,
                            int full_size);

// --- eigenvalue pair ------------------------------------------------------

struct EvpPair {
  SparseRealMatrix stiffness;   ///< symmetrized eigenvalue form
  SparseRealMatrix mass;
  double symmetry_defect = 0.0;  ///< of the raw form before symmetrization
  std::vector<int> kept_dofs;    ///< full-space indices (all DOFs if unconstrained)
};

/// Eigenvalue pair for the resonance gate: the Nitsche eigenvalue form for
/// eps = 1, the value-constrained conforming form for eps = 0 (impedance).
EvpPair assemble_evp_pair(const FeSpace& space, const ProblemConfig& config);

// --- systems and right-hand sides -----------------------------------------

/// (f, v) plus the boundary data terms that make the discrete problem
/// consistent with the field `data` (pass nullptr for homogeneous data).
Eigen::VectorXcd assemble_rhs(const FeSpace& space, const ProblemConfig& config,
                              const ScalarField& forcing, const ExactSolution* data);

struct AssembledSystem {
  SparseComplexMatrix matrix;
  Eigen::VectorXcd rhs;
  const FeSpace* space = nullptr;
  ProblemConfig config;
};

AssembledSystem assemble_system(const FeSpace& space, const ProblemConfig& config,
                                const ScalarField& forcing, const ExactSolution* data);

/// Boundary condition per mesh side tag, for mixed problems.
struct SideBc {
  BcKind bc = BcKind::Impedance;
  const ExactSolution* data = nullptr;
};

AssembledSystem assemble_mixed_system(const FeSpace& space, const ProblemConfig& config,
                                      const std::map<int, SideBc>& side_bcs,
                                      const ScalarField& forcing);

// --- Gram matrices for the mesh-dependent norms ----------------------------

SparseRealMatrix assemble_h1_semi_gram(const FeSpace& space);
SparseRealMatrix assemble_h2_semi_gram(const FeSpace& space);
SparseRealMatrix assemble_boundary_mass(const FeSpace& space);
/// H2-semi + H1-semi + epsilon * boundary mass; the Gram of the eps norm.
SparseRealMatrix assemble_eps_gram(const FeSpace& space, double epsilon);

}  // namespace helkort
