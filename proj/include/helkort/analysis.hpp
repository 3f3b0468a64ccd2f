// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "helkort/forms.hpp"
#include "helkort/linalg.hpp"
#include "helkort/space.hpp"

namespace helkort {

/// Positive root d of (alpha + beta (dhat.n)^2) d^4 + d^2 - k^2 = 0 for a unit
/// propagation direction dhat; the director is taken from the given region.
double dispersion_solve(const ProblemConfig& config, const Eigen::Vector2d& direction,
                        int region = 0);

/// exp(i d.x) with all derivatives; d may be complex (evanescent waves).
ExactSolution plane_wave(const Eigen::Vector2cd& d);

struct ManufacturedWave {
  ExactSolution exact;
  ScalarField forcing;  ///< (alpha (d.d)^2 + beta (d.d)(d.n)^2 + d.d - k^2) exp(i d.x)
  Eigen::Vector2cd wave_vector;
};

/// Plane-wave manufactured solution for an arbitrary wave vector; the forcing
/// vanishes identically when d satisfies the dispersion relation.
ManufacturedWave manufactured_forcing(const ProblemConfig& config, const Eigen::Vector2cd& d,
                                      int region = 0);

struct ResonanceReport {
  double k2 = 0.0;
  Eigen::VectorXd eigenvalues;  ///< ascending, as computed
  int i_star = 0;               ///< count of eigenvalues below k^2
  double margin = 0.0;          ///< min |lambda - k^2|
  bool pass = false;            ///< margin above tolerance and k^2 bracketed
  std::string note;
};

/// The gate arithmetic alone, given a computed ascending eigenvalue list.
ResonanceReport gate_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double k2,
                                      double rel_tol);

struct GateResult {
  ResonanceReport report;
  EigResult eig;
  EvpPair pair;
};

/// Assembles the eigenvalue pair and brackets k^2, doubling the eigenpair
/// count up to a cap when needed.
GateResult resonance_gate_full(const FeSpace& space, const ProblemConfig& config, int m = 20,
                               double rel_tol = 1e-3, const EigOptions& options = {});
ResonanceReport resonance_gate(const FeSpace& space, const ProblemConfig& config, int m = 20,
                               double rel_tol = 1e-3, const EigOptions& options = {});

/// The involution id - 2 P_W, with P_W the M-orthogonal projection onto the
/// span of the eigenvectors below k^2.
class TOperator {
 public:
  Eigen::MatrixXd basis;  ///< full-space eigenvectors below k^2, M-orthonormal columns
  SparseRealMatrix mass;  ///< full-space mass matrix
  Eigen::VectorXd eps_norms;  ///< eps-norm of each basis vector (reporting)

  int i_star() const { return static_cast<int>(basis.cols()); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
};

TOperator build_t_operator(const EigResult& eig, double k2, const FeSpace& space,
                           const EvpPair& pair);

/// min over seeded random complex trials of Re(u^H A_part T u) / |u|_eps^2.
double verify_t_coercivity(const SparseComplexMatrix& a_part, const TOperator& t_op,
                           const SparseRealMatrix& eps_gram, int trials, unsigned long seed);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  int dofs = 0;
  double err_l2 = 0.0, err_h1 = 0.0, err_h2 = 0.0;
  double rate_h2 = 0.0;  ///< log2(previous/current); 0 on the first row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log2(errH2) against the level.
  double least_squares_rate() const;
};

struct StudyOptions {
  double direction_angle = 0.3;  ///< plane-wave direction, incommensurate with the mesh
  bool run_gate = true;
  bool override_gate = false;  ///< keep going when the gate fails
  int gate_m = 20;
  double gate_rel_tol = 1e-3;
  EigOptions eig;
};

struct StudyReport {
  ConvergenceTable table;
  double max_rel_residual = 0.0;  ///< max post-solve |Ax-b|/|b| over all levels
  std::vector<ResonanceReport> gates;
};

/// Manufactured-plane-wave convergence study on the unit-square family.
/// Throws on gate failure unless options.override_gate is set.
StudyReport convergence_study(const ProblemConfig& config, ElementKind kind, int level_min,
                              int level_max, const StudyOptions& options = {});

/// Distance from center to the first sign change of Re(u) along direction.
/// Throws std::runtime_error when no crossing is found within max_radius.
double first_zero_crossing(const FeFunction& field, const Eigen::Vector2d& center,
                           const Eigen::Vector2d& direction, double step, double max_radius);

/// Zero-crossing distance along `along` divided by the one along `across`
/// (equals d_across/d_along for a locally plane-wave field).
double wavelength_anisotropy(const FeFunction& field, const Eigen::Vector2d& center,
                             const Eigen::Vector2d& along, const Eigen::Vector2d& across,
                             double step, double max_radius);

}  // namespace helkort
