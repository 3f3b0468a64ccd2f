// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "helkort/linalg.hpp"
#include "helkort/quadrature.hpp"

using namespace helkort;

namespace {

SparseComplexMatrix sparse_from_dense(const Eigen::MatrixXcd& D) {
  SparseComplexMatrix A(D.rows(), D.cols());
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  for (int i = 0; i < D.rows(); ++i)
    for (int j = 0; j < D.cols(); ++j)
      if (D(i, j) != std::complex<double>(0.0)) triplets.emplace_back(i, j, D(i, j));
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

SparseRealMatrix sparse_from_dense(const Eigen::MatrixXd& D) {
  SparseRealMatrix A(D.rows(), D.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < D.rows(); ++i)
    for (int j = 0; j < D.cols(); ++j)
      if (D(i, j) != 0.0) triplets.emplace_back(i, j, D(i, j));
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

// independent oracle: dense complex Gaussian elimination with partial pivoting
Eigen::VectorXcd gaussian_elimination(Eigen::MatrixXcd A, Eigen::VectorXcd b) {
  const int n = static_cast<int>(A.rows());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
    A.row(col).swap(A.row(pivot));
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      const std::complex<double> f = A(r, col) / A(col, col);
      A.row(r) -= f * A.row(col);
      b[r] -= f * b[col];
    }
  }
  Eigen::VectorXcd x(n);
  for (int r = n - 1; r >= 0; --r) {
    std::complex<double> s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A(r, c) * x[c];
    x[r] = s / A(r, r);
  }
  return x;
}

// cubic Hermite beam pencil on [0,1]: alpha (u'', v'') + (u', v') = lambda (u, v),
// clamped ends. Independent 1D oracle for the generalized eigensolver.
void hermite_beam(int elements, double alpha, SparseRealMatrix& E, SparseRealMatrix& M) {
  const int nodes = elements + 1;
  const int n = 2 * nodes;
  Eigen::MatrixXd Ed = Eigen::MatrixXd::Zero(n, n), Md = Eigen::MatrixXd::Zero(n, n);
  const double h = 1.0 / elements;
  const QuadratureRule rule = edge_rule(10);
  for (int e = 0; e < elements; ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points(q, 0);
      const double w = rule.weights[q] * h;
      const double H[4] = {1 - 3 * t * t + 2 * t * t * t, h * (t - 2 * t * t + t * t * t),
                           3 * t * t - 2 * t * t * t, h * (t * t * t - t * t)};
      const double dH[4] = {(-6 * t + 6 * t * t) / h, 1 - 4 * t + 3 * t * t,
                            (6 * t - 6 * t * t) / h, 3 * t * t - 2 * t};
      const double ddH[4] = {(-6 + 12 * t) / (h * h), (-4 + 6 * t) / h, (6 - 12 * t) / (h * h),
                             (6 * t - 2) / h};
      const int dofs[4] = {2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Ed(dofs[i], dofs[j]) += w * (alpha * ddH[i] * ddH[j] + dH[i] * dH[j]);
          Md(dofs[i], dofs[j]) += w * H[i] * H[j];
        }
    }
  }
  // clamped: drop value and slope at both ends
  const int kept = n - 4;
  E = sparse_from_dense(Eigen::MatrixXd(Ed.block(2, 2, kept, kept)));
  M = sparse_from_dense(Eigen::MatrixXd(Md.block(2, 2, kept, kept)));
}

}  // namespace

TEST_CASE("identity solve and zero right-hand side") {
  SparseComplexMatrix I(4, 4);
  I.setIdentity();
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
  e1[0] = 1.0;
  CHECK((solve_direct(I, e1) - e1).norm() == 0.0);
  CHECK(solve_direct(I, Eigen::VectorXcd::Zero(4)).norm() == 0.0);
}

TEST_CASE("random complex system against the elimination oracle") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = 50;
  Eigen::MatrixXcd D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  D += 10.0 * Eigen::MatrixXcd::Identity(n, n);  // keep it well conditioned
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b[i] = std::complex<double>(gauss(rng), gauss(rng));

  const Eigen::VectorXcd x = solve_direct(sparse_from_dense(D), b);
  const Eigen::VectorXcd oracle = gaussian_elimination(D, b);
  CHECK((x - oracle).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((D * x - b).norm() / b.norm() <= 1e-10);
}

TEST_CASE("singular systems point at the resonance gate") {
  Eigen::MatrixXcd D(3, 3);  // rank 2: third row repeats the second
  D << 1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 0.0, 1.0, 3.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(3);
  CHECK_THROWS_AS(solve_direct(sparse_from_dense(D), b), std::runtime_error);
  try {
    solve_direct(sparse_from_dense(D), b);
  } catch (const std::runtime_error& err) {
    CHECK(std::string(err.what()).find("resonance") != std::string::npos);
  }
}

TEST_CASE("diagonal eigenvalue pencils") {
  Eigen::MatrixXd E = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
  const EigResult r = sym_generalized_eig(sparse_from_dense(E), sparse_from_dense(M), 2);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

  // E = M (any SPD): every eigenvalue is one
  Eigen::MatrixXd S(3, 3);
  S << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const EigResult rs = sym_generalized_eig(sparse_from_dense(S), sparse_from_dense(S), 3);
  for (int i = 0; i < 3; ++i) CHECK(rs.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hermite beam oracle: coarse eigenvalue matches a 10x finer mesh") {
  SparseRealMatrix E, M, Ef, Mf;
  hermite_beam(20, 1e-2, E, M);
  hermite_beam(200, 1e-2, Ef, Mf);
  const EigResult coarse = sym_generalized_eig(E, M, 1);
  const EigResult fine = sym_generalized_eig(Ef, Mf, 1);
  CHECK(coarse.eigenvalues[0] == doctest::Approx(fine.eigenvalues[0]).epsilon(1e-3));
}

TEST_CASE("M-orthonormality and residual contracts") {
  SparseRealMatrix E, M;
  hermite_beam(40, 1e-2, E, M);
  const int m = 6;
  const EigResult r = sym_generalized_eig(E, M, m);
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M);
  const Eigen::MatrixXd gram = r.eigenvectors.transpose() * Md * r.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < m; ++i) {
    CHECK(r.residuals[i] <=
          1e-8 * (matrix_inf_norm(E) + std::abs(r.eigenvalues[i]) * matrix_inf_norm(M)));
    if (i > 0) CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  }
}

TEST_CASE("shift-invert fallback agrees with the dense path") {
  SparseRealMatrix E, M;
  hermite_beam(150, 1e-2, E, M);  // dimension 298
  const int m = 8;
  const EigResult dense = sym_generalized_eig(E, M, m);
  EigOptions opt;
  opt.dense_threshold = 10;  // force the Lanczos path
  const EigResult lanczos = sym_generalized_eig(E, M, m, opt);
  for (int i = 0; i < m; ++i)
    CHECK(lanczos.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M);
  const Eigen::MatrixXd gram = lanczos.eigenvectors.transpose() * Md * lanczos.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fallback can be disabled") {
  SparseRealMatrix E, M;
  hermite_beam(40, 1e-2, E, M);
  EigOptions opt;
  opt.dense_threshold = 10;
  opt.allow_iterative = false;
  CHECK_THROWS_AS(sym_generalized_eig(E, M, 2, opt), std::runtime_error);
}

TEST_CASE("deterministic outputs on identical inputs") {
  SparseRealMatrix E, M;
  hermite_beam(60, 1e-2, E, M);
  EigOptions opt;
  opt.dense_threshold = 10;
  const EigResult a = sym_generalized_eig(E, M, 4, opt);
  const EigResult b = sym_generalized_eig(E, M, 4, opt);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("asymmetric stiffness is rejected") {
  Eigen::MatrixXd E(2, 2), M = Eigen::MatrixXd::Identity(2, 2);
  E << 1.0, 0.5, 0.0, 2.0;
  CHECK_THROWS_AS(sym_generalized_eig(sparse_from_dense(E), sparse_from_dense(M), 1),
                  std::invalid_argument);
}
