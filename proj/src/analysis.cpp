// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace helkort {

double dispersion_solve(const ProblemConfig& config, const Eigen::Vector2d& direction,
                        int region) {
  const Eigen::Vector2d dhat = direction.normalized();
  const Eigen::Vector2d n = config.director.at(region);
  const double c = config.alpha + config.beta * std::pow(dhat.dot(n), 2);
  if (!(c > 0.0)) throw std::invalid_argument("dispersion_solve: nonpositive quartic coefficient");
  const double k2 = config.k * config.k;
  const double disc = 1.0 + 4.0 * c * k2;
  if (!(disc > 0.0)) throw std::runtime_error("dispersion_solve: nonpositive discriminant");
  // stable form of the positive quadratic root in d^2
  const double d2 = 2.0 * k2 / (1.0 + std::sqrt(disc));
  return std::sqrt(d2);
}

ExactSolution plane_wave(const Eigen::Vector2cd& d) {
  const Complex i(0.0, 1.0);
  ExactSolution u;
  u.value = [d, i](const Eigen::Vector2d& x) {
    return std::exp(i * (d[0] * x.x() + d[1] * x.y()));
  };
  u.gradient = [d, i](const Eigen::Vector2d& x) {
    const Complex e = std::exp(i * (d[0] * x.x() + d[1] * x.y()));
    return Eigen::Vector2cd(i * d[0] * e, i * d[1] * e);
  };
  u.hessian = [d, i](const Eigen::Vector2d& x) {
    const Complex e = std::exp(i * (d[0] * x.x() + d[1] * x.y()));
    Eigen::Matrix2cd H;
    H << -d[0] * d[0] * e, -d[0] * d[1] * e, -d[0] * d[1] * e, -d[1] * d[1] * e;
    return H;
  };
  u.third = [d, i](const Eigen::Vector2d& x) {
    const Complex e = std::exp(i * (d[0] * x.x() + d[1] * x.y()));
    return Eigen::Vector4cd(-i * d[0] * d[0] * d[0] * e, -i * d[0] * d[0] * d[1] * e,
                            -i * d[0] * d[1] * d[1] * e, -i * d[1] * d[1] * d[1] * e);
  };
  return u;
}

ManufacturedWave manufactured_forcing(const ProblemConfig& config, const Eigen::Vector2cd& d,
                                      int region) {
  const Eigen::Vector2d n = config.director.at(region);
  const Complex d2 = d[0] * d[0] + d[1] * d[1];  // bilinear, supports complex d
  const Complex dn = d[0] * n.x() + d[1] * n.y();
  const Complex residual =
      config.alpha * d2 * d2 + config.beta * d2 * dn * dn + d2 - config.k * config.k;
  ManufacturedWave wave;
  wave.exact = plane_wave(d);
  wave.wave_vector = d;
  const Complex i(0.0, 1.0);
  wave.forcing = [residual, d, i](const Eigen::Vector2d& x) {
    return residual * std::exp(i * (d[0] * x.x() + d[1] * x.y()));
  };
  return wave;
}

ResonanceReport gate_from_eigenvalues(const Eigen::VectorXd& eigenvalues, double k2,
                                      double rel_tol) {
  ResonanceReport report;
  report.k2 = k2;
  report.eigenvalues = eigenvalues;
  report.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < k2) report.i_star = i + 1;
    report.margin = std::min(report.margin, std::abs(eigenvalues[i] - k2));
  }
  const bool bracketed =
      eigenvalues.size() > 0 && eigenvalues[eigenvalues.size() - 1] > k2;
  report.pass = bracketed && report.margin > rel_tol * k2;
  if (!bracketed)
    report.note = "eigenvalue list does not bracket k^2";
  else if (!report.pass)
    report.note = "margin below tolerance: k^2 is numerically resonant on this mesh";
  return report;
}

GateResult resonance_gate_full(const FeSpace& space, const ProblemConfig& config, int m,
                               double rel_tol, const EigOptions& options) {
  GateResult result;
  result.pair = assemble_evp_pair(space, config);
  const int n = static_cast<int>(result.pair.stiffness.rows());
  const double k2 = config.k * config.k;
  const int cap = std::min(n, 600);
  int count = std::min(m, n);
  while (true) {
    result.eig = sym_generalized_eig(result.pair.stiffness, result.pair.mass, count, options);
    if (result.eig.eigenvalues[count - 1] > k2 || count == cap) break;
    count = std::min(2 * count, cap);
  }
  result.report = gate_from_eigenvalues(result.eig.eigenvalues, k2, rel_tol);
  if (!result.report.pass && result.report.eigenvalues[count - 1] <= k2)
    result.report.note = "eigenpair cap reached without bracketing k^2";
  return result;
}

ResonanceReport resonance_gate(const FeSpace& space, const ProblemConfig& config, int m,
                               double rel_tol, const EigOptions& options) {
  return resonance_gate_full(space, config, m, rel_tol, options).report;
}

Eigen::VectorXcd TOperator::apply(const Eigen::VectorXcd& u) const {
  if (basis.cols() == 0) return u;
  const Eigen::VectorXd mu_re = mass * u.real();
  const Eigen::VectorXd mu_im = mass * u.imag();
  const Eigen::VectorXd c_re = basis.transpose() * mu_re;
  const Eigen::VectorXd c_im = basis.transpose() * mu_im;
  Eigen::VectorXcd out = u;
  out.real() -= 2.0 * (basis * c_re);
  out.imag() -= 2.0 * (basis * c_im);
  return out;
}

TOperator build_t_operator(const EigResult& eig, double k2, const FeSpace& space,
                           const EvpPair& pair) {
  TOperator t;
  t.mass = assemble_mass(space);
  int istar = 0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues[i] < k2) istar = i + 1;
  t.basis.resize(space.n_dofs(), istar);
  for (int i = 0; i < istar; ++i)
    t.basis.col(i) = expand_from(eig.eigenvectors.col(i), pair.kept_dofs, space.n_dofs());
  // eps-norm of each (M-orthonormal) eigenvector, recorded for reporting; the
  // projection itself is M-orthogonal and unaffected by this scaling.
  const SparseRealMatrix eps_gram = assemble_eps_gram(space, 1.0);
  t.eps_norms.resize(istar);
  for (int i = 0; i < istar; ++i) {
    const Eigen::VectorXd v = t.basis.col(i);
    t.eps_norms[i] = std::sqrt(std::max(0.0, v.dot(eps_gram * v)));
  }
  return t;
}

double verify_t_coercivity(const SparseComplexMatrix& a_part, const TOperator& t_op,
                           const SparseRealMatrix& eps_gram, int trials, unsigned long seed) {
  const int n = static_cast<int>(a_part.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double gamma = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i) u[i] = Complex(gauss(rng), gauss(rng));
    const Eigen::VectorXcd tu = t_op.apply(u);
    const Complex num = u.dot(a_part * tu);
    const double den = u.real().dot(eps_gram * u.real()) + u.imag().dot(eps_gram * u.imag());
    gamma = std::min(gamma, num.real() / den);
  }
  return gamma;
}

double ConvergenceTable::least_squares_rate() const {
  const int n = static_cast<int>(rows.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ConvergenceRow& r : rows) {
    const double x = r.level, y = std::log2(r.err_h2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

StudyReport convergence_study(const ProblemConfig& config, ElementKind kind, int level_min,
                              int level_max, const StudyOptions& options) {
  config.validate();
  if (level_min < 0 || level_max < level_min)
    throw std::invalid_argument("convergence_study: bad level range");
  StudyReport report;
  const Eigen::Vector2d direction(std::cos(options.direction_angle),
                                  std::sin(options.direction_angle));
  const double d = dispersion_solve(config, direction);
  const ManufacturedWave wave =
      manufactured_forcing(config, (d * direction).cast<Complex>().eval());

  for (int level = level_min; level <= level_max; ++level) {
    auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(level));
    const FeSpace space = FeSpace::build(mesh, kind);

    if (options.run_gate) {
      const ResonanceReport gate =
          resonance_gate(space, config, options.gate_m, options.gate_rel_tol, options.eig);
      report.gates.push_back(gate);
      if (!gate.pass && !options.override_gate)
        throw std::runtime_error("convergence_study: resonance gate failed at level " +
                                 std::to_string(level) + " (" + gate.note + ")");
    }

    const AssembledSystem sys = assemble_system(space, config, wave.forcing, &wave.exact);
    const Eigen::VectorXcd x = solve_direct(sys.matrix, sys.rhs);
    const double rel = (sys.rhs - sys.matrix * x).norm() / sys.rhs.norm();
    report.max_rel_residual = std::max(report.max_rel_residual, rel);

    FeFunction fn;
    fn.space = &space;
    fn.coeffs = x;
    const Norms norms = compute_error_norms(fn, wave.exact, config.norm_weights());

    ConvergenceRow row;
    row.level = level;
    row.h = mesh->mesh_size();
    row.dofs = space.n_dofs();
    row.err_l2 = norms.l2;
    row.err_h1 = norms.h1_semi;
    row.err_h2 = std::sqrt(norms.l2 * norms.l2 + norms.h1_semi * norms.h1_semi +
                           norms.h2_semi * norms.h2_semi);
    if (!report.table.rows.empty())
      row.rate_h2 = std::log2(report.table.rows.back().err_h2 / row.err_h2);
    report.table.rows.push_back(row);
  }
  return report;
}

double first_zero_crossing(const FeFunction& field, const Eigen::Vector2d& center,
                           const Eigen::Vector2d& direction, double step, double max_radius) {
  const Eigen::Vector2d dir = direction.normalized();
  double prev_r = step;
  double prev = evaluate(field, center + prev_r * dir, 0)[0].real();
  for (double r = 2.0 * step; r <= max_radius; r += step) {
    const double cur = evaluate(field, center + r * dir, 0)[0].real();
    if (prev == 0.0) return prev_r;
    if (prev * cur < 0.0) return prev_r + step * prev / (prev - cur);
    prev = cur;
    prev_r = r;
  }
  throw std::runtime_error("first_zero_crossing: no zero crossing found within the domain");
}

double wavelength_anisotropy(const FeFunction& field, const Eigen::Vector2d& center,
                             const Eigen::Vector2d& along, const Eigen::Vector2d& across,
                             double step, double max_radius) {
  const double r_along = first_zero_crossing(field, center, along, step, max_radius);
  const double r_across = first_zero_crossing(field, center, across, step, max_radius);
  return r_along / r_across;
}

}  // namespace helkort
