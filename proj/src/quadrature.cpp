// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace helkort {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = xi;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * xi * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // recompute P' at the converged node for the weight
    double p0 = 1.0, p1 = xi;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2 * k + 1) * xi * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
    }
    dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[n - 1 - i] = xi;  // ascending order
    w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

}  // namespace

QuadratureRule edge_rule(int degree) {
  if (degree < 1 || degree > 40) throw std::invalid_argument("edge_rule: degree must be in [1,40]");
  const int n = (degree + 2) / 2;
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(i, 0) = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  rule.exactness_degree = degree;
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 1 || degree > 20)
    throw std::invalid_argument("triangle_rule: degree must be in [1,20]");

  QuadratureRule rule;
  rule.exactness_degree = degree;
  if (degree == 1) {
    rule.points.resize(1, 3);
    rule.points << 1.0 / 3, 1.0 / 3, 1.0 / 3;
    rule.weights.resize(1);
    rule.weights << 0.5;
    return rule;
  }
  if (degree == 2) {
    rule.points.resize(3, 3);
    rule.points << 2.0 / 3, 1.0 / 6, 1.0 / 6,  //
        1.0 / 6, 2.0 / 3, 1.0 / 6,             //
        1.0 / 6, 1.0 / 6, 2.0 / 3;
    rule.weights = Eigen::VectorXd::Constant(3, 1.0 / 6);
    return rule;
  }

  // Collapsed (Duffy) tensor product: x = s(1-t), y = t with Gauss-Legendre in
  // both directions; the Jacobian (1-t) raises the t-degree by one.
  Eigen::VectorXd xs, ws, xt, wt;
  const int ns = (degree + 2) / 2;
  const int nt = (degree + 3) / 2;
  gauss_legendre(ns, xs, ws);
  gauss_legendre(nt, xt, wt);
  const int n = ns * nt;
  rule.points.resize(n, 3);
  rule.weights.resize(n);
  int q = 0;
  for (int i = 0; i < ns; ++i) {
    const double s = 0.5 * (xs[i] + 1.0);
    for (int j = 0; j < nt; ++j, ++q) {
      const double t = 0.5 * (xt[j] + 1.0);
      const double x = s * (1.0 - t);
      const double y = t;
      rule.points(q, 0) = 1.0 - x - y;
      rule.points(q, 1) = x;
      rule.points(q, 2) = y;
      rule.weights[q] = 0.25 * ws[i] * wt[j] * (1.0 - t);
    }
  }
  return rule;
}

}  // namespace helkort
