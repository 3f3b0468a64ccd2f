// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

namespace helkort {

/// Quadrature rule on the reference triangle (barycentric points, weights
/// summing to 1/2) or on the reference edge [0,1] (weights summing to 1).
struct QuadratureRule {
  Eigen::MatrixXd points;   ///< n x 3 barycentric triples, or n x 1 edge parameters
  Eigen::VectorXd weights;  ///< all positive
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Rule exact for all bivariate monomials of total degree <= degree on the
/// reference triangle {(x,y) : x,y >= 0, x + y <= 1}. Supported: 1..20.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1], exact for degree <= degree. Supported: 1..40.
QuadratureRule edge_rule(int degree);

}  // namespace helkort
