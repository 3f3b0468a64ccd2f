// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <complex>

namespace helkort {

/// Row-compressed sparse storage; inner (column) indices sorted per row.
using SparseComplexMatrix = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
using SparseRealMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Direct solve by complex LU with partial pivoting, followed by iterative
/// refinement until the relative residual is at most 1e-10. Throws
/// std::runtime_error on a numerically singular pivot (for assembled Helmholtz
/// systems this typically means the resonance gate was skipped or failed).
Eigen::VectorXcd solve_direct(const SparseComplexMatrix& A, const Eigen::VectorXcd& b);

struct EigResult {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< columns, M-orthonormal
  Eigen::VectorXd residuals;     ///< |E v - lambda M v|_2 per pair
};

struct EigOptions {
  int dense_threshold = 6000;   ///< densify below, shift-invert Lanczos above
  bool allow_iterative = true;  ///< permit the Lanczos fallback
  double residual_tol = 1e-8;   ///< relative to |E|_inf + |lambda| |M|_inf
  int max_iterations = 400;     ///< Lanczos cap
  unsigned long seed = 0x9e3779b9u;
};

/// The m algebraically smallest eigenpairs of E x = lambda M x with E
/// symmetric and M symmetric positive definite. Deterministic for identical
/// inputs. Throws if M is not SPD, if E is visibly unsymmetric, or if the
/// problem exceeds the dense threshold with the fallback disabled.
EigResult sym_generalized_eig(const SparseRealMatrix& E, const SparseRealMatrix& M, int m,
                              const EigOptions& options = {});

double matrix_inf_norm(const SparseRealMatrix& A);
double matrix_inf_norm(const SparseComplexMatrix& A);
/// |A - A^T|_inf / |A|_inf.
double symmetry_defect(const SparseRealMatrix& A);
double symmetry_defect(const SparseComplexMatrix& A);

}  // namespace helkort
