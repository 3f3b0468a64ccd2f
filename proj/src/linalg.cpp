// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace helkort {

double matrix_inf_norm(const SparseRealMatrix& A) {
  double norm = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double row = 0.0;
    for (SparseRealMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  return norm;
}

double matrix_inf_norm(const SparseComplexMatrix& A) {
  double norm = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double row = 0.0;
    for (SparseComplexMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  return norm;
}

namespace {
template <typename Mat>
double symmetry_defect_impl(const Mat& A) {
  Mat D = Mat(A - Mat(A.transpose()));
  const double na = matrix_inf_norm(A);
  return na == 0.0 ? 0.0 : matrix_inf_norm(D) / na;
}
}  // namespace

double symmetry_defect(const SparseRealMatrix& A) { return symmetry_defect_impl(A); }
double symmetry_defect(const SparseComplexMatrix& A) { return symmetry_defect_impl(A); }

Eigen::VectorXcd solve_direct(const SparseComplexMatrix& A, const Eigen::VectorXcd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("solve_direct: dimension mismatch");
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Eigen::VectorXcd::Zero(b.size());

  Eigen::SparseMatrix<std::complex<double>> Ac = A;  // column-major working copy
  Ac.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error(
        "solve_direct: numerically singular pivot; k^2 may sit on a discrete eigenvalue "
        "(run the resonance gate) or the assembly is inconsistent");

  Eigen::VectorXcd x = lu.solve(b);
  double rel = (b - A * x).norm() / bnorm;
  for (int pass = 0; pass < 3 && rel > 1e-10; ++pass) {
    const Eigen::VectorXcd r = b - A * x;
    x += lu.solve(r);
    rel = (b - A * x).norm() / bnorm;
  }
  if (!(rel <= 1e-10) && !(rel < 1e-8))
    throw std::runtime_error("solve_direct: iterative refinement stalled at relative residual " +
                             std::to_string(rel));
  return x;
}

namespace {

EigResult finalize_pairs(const SparseRealMatrix& E, const SparseRealMatrix& M,
                         Eigen::VectorXd values, Eigen::MatrixXd vectors) {
  EigResult out;
  out.eigenvalues = std::move(values);
  out.eigenvectors = std::move(vectors);
  out.residuals.resize(out.eigenvalues.size());
  for (int i = 0; i < out.eigenvalues.size(); ++i) {
    const Eigen::VectorXd v = out.eigenvectors.col(i);
    out.residuals[i] = (E * v - out.eigenvalues[i] * (M * v)).norm();
  }
  return out;
}

EigResult dense_path(const SparseRealMatrix& E, const SparseRealMatrix& M, int m) {
  const Eigen::MatrixXd Ed = Eigen::MatrixXd(E);
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (Ed + Ed.transpose()), 0.5 * (Md + Md.transpose()),
      Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sym_generalized_eig: mass matrix is not positive definite");
  return finalize_pairs(E, M, solver.eigenvalues().head(m), solver.eigenvectors().leftCols(m));
}

// Shift-invert Lanczos at sigma = 0 in the M inner product, with full
// reorthogonalization. E must be positive definite (true for the coercive
// eigenvalue forms this solver is used on).
EigResult lanczos_path(const SparseRealMatrix& E, const SparseRealMatrix& M, int m,
                       const EigOptions& opt) {
  const int n = static_cast<int>(E.rows());
  Eigen::SparseMatrix<double> Ec = E;
  Ec.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(Ec);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("sym_generalized_eig: factorization of the stiffness form failed");
  // shift-invert at zero targets the smallest positive eigenvalues; an
  // indefinite stiffness form would be silently misread, so reject it
  if (ldlt.vectorD().minCoeff() <= 0.0)
    throw std::runtime_error(
        "sym_generalized_eig: stiffness form is indefinite; the penalty parameters are too small "
        "for this discretization");

  const int max_steps = std::min(n, std::max(opt.max_iterations, 3 * m + 30));
  Eigen::MatrixXd V(n, max_steps + 1);
  std::vector<double> alpha, beta;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = gauss(rng);
  q /= std::sqrt(q.dot(M * q));
  V.col(0) = q;

  const double e_norm = matrix_inf_norm(E);
  const double m_norm = matrix_inf_norm(M);

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int steps = 0;
  int check_at = std::max(2 * m, 20);
  while (steps < max_steps) {
    Eigen::VectorXd w = ldlt.solve(M * V.col(steps));
    const double a = w.dot(M * V.col(steps));
    alpha.push_back(a);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd proj = V.leftCols(steps + 1).transpose() * (M * w);
      w -= V.leftCols(steps + 1) * proj;
    }
    double b = std::sqrt(std::max(0.0, w.dot(M * w)));
    if (b < 1e-13) {
      // invariant subspace found; restart with a fresh random direction
      for (int i = 0; i < n; ++i) w[i] = gauss(rng);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd proj = V.leftCols(steps + 1).transpose() * (M * w);
        w -= V.leftCols(steps + 1) * proj;
      }
      b = std::sqrt(std::max(1e-300, w.dot(M * w)));
      beta.push_back(0.0);
    } else {
      beta.push_back(b);
    }
    V.col(steps + 1) = w / b;
    ++steps;

    if (steps >= check_at || steps == max_steps) {
      check_at = steps + std::max(10, m / 2);
      if (steps < m) continue;
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
      for (int i = 0; i < steps; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(T);
      // theta = 1/lambda: the m largest thetas are the m smallest lambdas
      const Eigen::VectorXd theta = tsolver.eigenvalues();
      values.resize(m);
      vectors.resize(n, m);
      bool converged = true;
      for (int i = 0; i < m; ++i) {
        const int idx = steps - 1 - i;  // i-th largest theta
        const double lambda = 1.0 / theta[idx];
        const Eigen::VectorXd v = V.leftCols(steps) * tsolver.eigenvectors().col(idx);
        values[i] = lambda;
        vectors.col(i) = v;
        const double res = (E * v - lambda * (M * v)).norm();
        if (res > opt.residual_tol * (e_norm + std::abs(lambda) * m_norm)) converged = false;
      }
      if (converged) break;
      if (steps == max_steps)
        throw std::runtime_error("sym_generalized_eig: Lanczos did not converge within " +
                                 std::to_string(max_steps) + " steps");
    }
  }
  return finalize_pairs(E, M, std::move(values), std::move(vectors));
}

}  // namespace

EigResult sym_generalized_eig(const SparseRealMatrix& E, const SparseRealMatrix& M, int m,
                              const EigOptions& options) {
  const int n = static_cast<int>(E.rows());
  if (E.rows() != E.cols() || M.rows() != M.cols() || E.rows() != M.rows())
    throw std::invalid_argument("sym_generalized_eig: dimension mismatch");
  if (m < 1 || m > n) throw std::invalid_argument("sym_generalized_eig: invalid pair count");
  if (symmetry_defect(E) > 1e-8)
    throw std::invalid_argument("sym_generalized_eig: stiffness form is not symmetric");

  EigResult result = (n <= options.dense_threshold)
                         ? dense_path(E, M, m)
                         : (options.allow_iterative
                                ? lanczos_path(E, M, m, options)
                                : throw std::runtime_error(
                                      "sym_generalized_eig: problem exceeds the dense threshold "
                                      "and the shift-invert fallback is disabled"));

  const double scale = matrix_inf_norm(E);
  for (int i = 0; i < result.eigenvalues.size(); ++i) {
    const double bound = options.residual_tol *
                         (scale + std::abs(result.eigenvalues[i]) * matrix_inf_norm(M));
    if (result.residuals[i] > bound)
      throw std::runtime_error("sym_generalized_eig: eigenpair residual above contract");
  }
  return result;
}

}  // namespace helkort
