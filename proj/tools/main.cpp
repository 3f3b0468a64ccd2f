// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: convergence studies, the Gaussian pulse and
// Mullen-Luthi-Stephen experiments, eigenvalue reports, dispersion sweeps and
// generic solves. Every run writes a flat key = value manifest with content
// hashes of its outputs.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "helkort/analysis.hpp"
#include "helkort/io.hpp"

using namespace helkort;

namespace {

struct CommonOpts {
  double alpha = 1e-2;
  double beta = 0.0;
  double k = 10.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::string bc = "soft";
  std::string element = "argyris";
  double eta1 = -1.0, eta2 = -1.0, eta3 = -1.0;
  double director_angle = 0.0;  // degrees
  std::string outdir = "out";
  int level = 5;
  std::string levels = "2:5";
  int sample = 0;
  bool dump_matrix = false;
  bool mesh_dump = false;
  bool override_gate = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->set_config("--config", "", "flat key = value configuration file");
  cmd->add_option("--alpha", o.alpha, "Korteweg coefficient")->capture_default_str();
  cmd->add_option("--beta", o.beta, "nematic coefficient")->capture_default_str();
  cmd->add_option("--k", o.k, "wave number")->capture_default_str();
  cmd->add_option("--theta", o.theta, "impedance parameter (defaults to k)");
  cmd->add_option("--bc", o.bc, "boundary condition: soft|hard|impedance")
      ->capture_default_str();
  cmd->add_option("--element", o.element, "element: argyris|hct")->capture_default_str();
  cmd->add_option("--eta1", o.eta1, "Nitsche penalty (alpha/h^3 block)");
  cmd->add_option("--eta2", o.eta2, "Nitsche penalty (1/h block)");
  cmd->add_option("--eta3", o.eta3, "nematic Nitsche penalty");
  cmd->add_option("--director-angle", o.director_angle, "uniform director angle in degrees")
      ->capture_default_str();
  cmd->add_option("--outdir", o.outdir, "output directory")->capture_default_str();
  cmd->add_flag("--override-gate", o.override_gate, "proceed when the resonance gate fails");
  cmd->add_flag("--mesh-dump", o.mesh_dump, "write the mesh in plain text");
  cmd->add_flag("--dump-matrix", o.dump_matrix, "write the system matrix in coordinate format");
}

ProblemConfig to_config(const CommonOpts& o) {
  ProblemConfig c;
  c.alpha = o.alpha;
  c.beta = o.beta;
  c.k = o.k;
  c.theta = o.theta;
  c.eta1 = o.eta1;
  c.eta2 = o.eta2;
  c.eta3 = o.eta3;
  if (o.bc == "soft")
    c.bc = BcKind::SoundSoft;
  else if (o.bc == "hard")
    c.bc = BcKind::SoundHard;
  else if (o.bc == "impedance")
    c.bc = BcKind::Impedance;
  else
    throw CLI::ValidationError("--bc", "expected soft|hard|impedance");
  c.director = DirectorField::from_angle(o.director_angle * M_PI / 180.0);
  return c;
}

ElementKind to_kind(const std::string& name) {
  if (name == "argyris") return ElementKind::Argyris5;
  if (name == "hct") return ElementKind::HCT3;
  throw CLI::ValidationError("--element", "expected argyris|hct");
}

std::pair<int, int> parse_levels(const std::string& spec) {
  const auto colon = spec.find_first_of(":.");
  if (colon == std::string::npos) {
    const int single = std::stoi(spec);
    return {single, single};
  }
  const int lo = std::stoi(spec.substr(0, colon));
  const size_t rest = spec.find_first_not_of(":.", colon);
  const int hi = std::stoi(spec.substr(rest));
  return {lo, hi};
}

std::string out_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.outdir);
  return (std::filesystem::path(o.outdir) / name).string();
}

void echo_config(Manifest& m, const ProblemConfig& c, ElementKind kind) {
  m.set("alpha", c.alpha);
  m.set("beta", c.beta);
  m.set("k", c.k);
  m.set("theta", c.resolved_theta());
  m.set("bc", c.bc == BcKind::SoundSoft ? "soft" : c.bc == BcKind::SoundHard ? "hard" : "impedance");
  m.set("epsilon", c.resolved_epsilon());
  m.set("eta1", c.resolved_eta1(kind));
  m.set("eta2", c.resolved_eta2(kind));
  m.set("eta3", c.resolved_eta3(kind));
  m.set("element", kind == ElementKind::Argyris5 ? "argyris" : "hct");
  int i = 0;
  for (const auto& [tag, n] : c.director.regions) {
    m.set("director." + std::to_string(tag),
          format_double(n.x()) + " " + format_double(n.y()));
    ++i;
  }
}

void record_gate(Manifest& m, const ResonanceReport& gate, const std::string& prefix) {
  m.set(prefix + ".i_star", gate.i_star);
  m.set(prefix + ".margin", gate.margin);
  m.set(prefix + ".verdict", gate.pass ? "pass" : "fail");
}

std::string beta_label(double beta) {
  return beta == 0.0 ? "0.0" : format_double(beta);
}

// --- convergence ------------------------------------------------------------

int run_convergence_case(const CommonOpts& o, double k, double beta, ElementKind kind) {
  CommonOpts local = o;
  local.k = k;
  local.beta = beta;
  ProblemConfig config = to_config(local);
  const auto [lmin, lmax] = parse_levels(o.levels);
  StudyOptions options;
  options.override_gate = o.override_gate;

  const std::string elem = kind == ElementKind::Argyris5 ? "ARG" : "HCT";
  char kbuf[32];
  std::snprintf(kbuf, sizeof(kbuf), "%.1f", k);
  const std::string bc_suffix = config.bc == BcKind::SoundSoft    ? ""
                                : config.bc == BcKind::SoundHard ? "_hard"
                                                                 : "_impedance";
  const std::string name = "convergence_" + elem + "_" + kbuf + "_" + format_double(o.alpha) +
                           "_" + beta_label(beta) + bc_suffix + ".csv";
  std::printf("== %s (levels %d..%d)\n", name.c_str(), lmin, lmax);

  const StudyReport report = convergence_study(config, kind, lmin, lmax, options);
  for (const ConvergenceRow& r : report.table.rows)
    std::printf("  level %d  h %.4f  dofs %6d  errH2 %.6e  rate %.2f\n", r.level, r.h, r.dofs,
                r.err_h2, r.rate_h2);
  std::printf("  least-squares rate %.3f, max solve residual %.2e\n",
              report.table.least_squares_rate(), report.max_rel_residual);

  const std::string csv = out_path(o, name);
  write_convergence_csv(csv, report.table);
  Manifest manifest;
  manifest.set("experiment", "convergence");
  echo_config(manifest, config, kind);
  manifest.set("levels", o.levels);
  for (size_t i = 0; i < report.gates.size(); ++i)
    record_gate(manifest, report.gates[i], "gate.level" + std::to_string(lmin + (int)i));
  manifest.set("rate", report.table.least_squares_rate());
  manifest.add_output(csv);
  manifest.write(out_path(o, "manifest_" + name + ".txt"));
  return 0;
}

int cmd_convergence(const CommonOpts& o, const CLI::App* cmd) {
  const bool single = cmd->count("--k") || cmd->count("--beta") || cmd->count("--element");
  if (single) return run_convergence_case(o, o.k, o.beta, to_kind(o.element));
  // reproduction grid
  for (double k : {10.0, 20.0, 30.0})
    for (double beta : {0.0, 5e-3})
      for (ElementKind kind : {ElementKind::Argyris5, ElementKind::HCT3})
        run_convergence_case(o, k, beta, kind);
  return 0;
}

// --- pulse -------------------------------------------------------------------

ScalarField gaussian_pulse() {
  return [](const Eigen::Vector2d& p) {
    const double r2 = (p.x() - 0.5) * (p.x() - 0.5) + (p.y() - 0.5) * (p.y() - 0.5);
    return Complex(std::exp(-1600.0 * r2));
  };
}

int run_pulse_case(const CommonOpts& o, BcKind bc, double beta, const Eigen::Vector2d& director,
                   const std::string& tag) {
  CommonOpts local = o;
  local.beta = beta;
  ProblemConfig config = to_config(local);
  config.bc = bc;
  config.epsilon = -1;
  config.director = DirectorField::uniform(director.norm() > 0 ? director : Eigen::Vector2d(1, 0));

  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(o.level));
  const FeSpace space = FeSpace::build(mesh, to_kind(o.element));
  const GateResult gate = resonance_gate_full(space, config);
  if (!gate.report.pass && !o.override_gate)
    throw std::runtime_error("pulse: resonance gate failed (" + gate.report.note + ")");

  const AssembledSystem sys = assemble_system(space, config, gaussian_pulse(), nullptr);
  FeFunction fn;
  fn.space = &space;
  fn.coeffs = solve_direct(sys.matrix, sys.rhs);

  const std::string base = "pulse_" + std::string(bc == BcKind::SoundSoft ? "soft" : "impedance") +
                           "_beta" + beta_label(beta) + "_" + tag;
  const int samples = o.sample > 0 ? o.sample : 201;
  const std::string csv = out_path(o, base + ".csv");
  const std::string vtu = out_path(o, base + ".vtu");
  write_field_csv(csv, fn, samples);
  write_vtu(vtu, fn);

  Manifest manifest;
  manifest.set("experiment", "pulse");
  echo_config(manifest, config, space.kind());
  manifest.set("level", o.level);
  manifest.set("sample", samples);
  record_gate(manifest, gate.report, "gate");
  manifest.add_output(csv);
  manifest.add_output(vtu);

  // wavelength diagnostics from the first radial zero crossings
  const Eigen::Vector2d centre(0.5, 0.5);
  const double step = mesh->mesh_size() / 16.0;
  const Eigen::Vector2d along = config.director.at(0);
  const Eigen::Vector2d across(-along.y(), along.x());
  try {
    const double ratio = wavelength_anisotropy(fn, centre, along, across, step, 0.45);
    const double predicted =
        dispersion_solve(config, across) / dispersion_solve(config, along);
    std::printf("  %s: measured along/across ratio %.4f (dispersion predicts %.4f)\n",
                base.c_str(), ratio, predicted);
    manifest.set("anisotropy.measured", ratio);
    manifest.set("anisotropy.predicted", predicted);
  } catch (const std::exception& err) {
    std::printf("  %s: anisotropy not measurable (%s)\n", base.c_str(), err.what());
  }
  manifest.write(out_path(o, "manifest_" + base + ".txt"));
  return 0;
}

int cmd_pulse(const CommonOpts& o) {
  std::vector<BcKind> families;
  if (o.bc == "both") {
    families = {BcKind::SoundSoft, BcKind::Impedance};
  } else {
    CommonOpts probe = o;
    families = {to_config(probe).bc};
  }
  const double beta = o.beta;
  for (BcKind bc : families) {
    run_pulse_case(o, bc, 0.0, {1.0, 0.0}, "isotropic");
    if (beta > 0.0) {
      run_pulse_case(o, bc, beta, {1.0, 0.0}, "x");
      run_pulse_case(o, bc, beta, Eigen::Vector2d(1.0, 1.0).normalized(), "diag");
      run_pulse_case(o, bc, beta, {0.0, 1.0}, "y");
    }
  }
  return 0;
}

// --- Mullen-Luthi-Stephen ----------------------------------------------------

// average distance between consecutive sign changes of Re(u) along a segment,
// doubled: the local wavelength
double measured_wavelength(const FeFunction& fn, const Eigen::Vector2d& start,
                           const Eigen::Vector2d& dir, double length, double step) {
  std::vector<double> crossings;
  double prev = evaluate(fn, start, 0)[0].real();
  for (double t = step; t <= length; t += step) {
    const double cur = evaluate(fn, start + t * dir, 0)[0].real();
    if (prev * cur < 0.0) crossings.push_back(t - step + step * prev / (prev - cur));
    prev = cur;
  }
  if (crossings.size() < 3)
    throw std::runtime_error("measured_wavelength: not enough zero crossings");
  return 2.0 * (crossings.back() - crossings.front()) /
         static_cast<double>(crossings.size() - 1);
}

int cmd_mls(const CommonOpts& o, const std::string& central_director) {
  ProblemConfig config = to_config(o);
  config.bc = BcKind::Impedance;

  auto base_mesh = std::make_shared<TriMesh>(build_unit_square_mesh(o.level));
  for (int t = 0; t < base_mesh->n_triangles(); ++t) {
    const double x = base_mesh->triangle_barycenter(t).x();
    base_mesh->region_tags[t] = (x > 1.0 / 3.0 && x < 2.0 / 3.0) ? 1 : 0;
  }
  std::shared_ptr<const TriMesh> mesh = base_mesh;

  const Eigen::Vector2d central =
      central_director == "x" ? Eigen::Vector2d(1, 0) : Eigen::Vector2d(0, 1);
  const Eigen::Vector2d outer(central.y(), central.x());
  config.director = DirectorField{};
  config.director.set(0, outer);
  config.director.set(1, central);

  const FeSpace space = FeSpace::build(mesh, to_kind(o.element));

  // incoming plane wave from the top, dispersion-matched in the outer region
  const double d_in = dispersion_solve(config, {0.0, -1.0}, 0);
  const ManufacturedWave incoming =
      manufactured_forcing(config, Eigen::Vector2cd(0.0, Complex(-d_in, 0.0)), 0);

  std::map<int, SideBc> sides;
  sides[0] = {BcKind::SoundSoft, nullptr};        // bottom
  sides[1] = {BcKind::Impedance, nullptr};        // right
  sides[3] = {BcKind::Impedance, nullptr};        // left
  sides[2] = {BcKind::Impedance, &incoming.exact};  // top: inflow data

  const AssembledSystem sys = assemble_mixed_system(space, config, sides, nullptr);
  FeFunction fn;
  fn.space = &space;
  fn.coeffs = solve_direct(sys.matrix, sys.rhs);

  const int samples = o.sample > 0 ? o.sample : 201;
  const std::string field_csv = out_path(o, "mls_field.csv");
  const std::string field_vtu = out_path(o, "mls_field.vtu");
  write_field_csv(field_csv, fn, samples);
  write_vtu(field_vtu, fn);

  const std::string director_csv = out_path(o, "mls_director.csv");
  {
    std::ofstream os(director_csv);
    os << "x,y,nx,ny\n";
    for (int t = 0; t < mesh->n_triangles(); ++t) {
      const Eigen::Vector2d c = mesh->triangle_barycenter(t);
      const Eigen::Vector2d n = config.director.at(mesh->region_tags[t]);
      os << format_double(c.x()) << "," << format_double(c.y()) << "," << format_double(n.x())
         << "," << format_double(n.y()) << "\n";
    }
  }

  Manifest manifest;
  manifest.set("experiment", "mls");
  echo_config(manifest, config, space.kind());
  manifest.set("level", o.level);
  manifest.set("central_director", central_director);
  manifest.set("strip", "x in [1/3, 2/3]");
  manifest.set("bc.bottom", "soft");
  manifest.set("bc.sides", "impedance");
  manifest.set("bc.top", "impedance inflow");
  manifest.set("inflow.d", d_in);

  // vertical wavelengths per region against the dispersion prediction
  const double step = mesh->mesh_size() / 16.0;
  try {
    const double central_wl =
        measured_wavelength(fn, {0.5, 0.15}, {0.0, 1.0}, 0.7, step);
    const double outer_wl =
        measured_wavelength(fn, {1.0 / 6.0, 0.15}, {0.0, 1.0}, 0.7, step);
    const double predicted = dispersion_solve(config, {0.0, 1.0}, 0) /
                             dispersion_solve(config, {0.0, 1.0}, 1);
    std::printf("mls: central/outer vertical wavelength %.4f (dispersion predicts %.4f)\n",
                central_wl / outer_wl, predicted);
    manifest.set("wavelength.ratio_measured", central_wl / outer_wl);
    manifest.set("wavelength.ratio_predicted", predicted);
  } catch (const std::exception& err) {
    std::printf("mls: wavelength not measurable (%s)\n", err.what());
  }
  manifest.add_output(field_csv);
  manifest.add_output(field_vtu);
  manifest.add_output(director_csv);
  manifest.write(out_path(o, "manifest_mls.txt"));
  return 0;
}

// --- eigs, dispersion, solve --------------------------------------------------

int cmd_eigs(const CommonOpts& o, int m) {
  ProblemConfig config = to_config(o);
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(o.level));
  const FeSpace space = FeSpace::build(mesh, to_kind(o.element));
  const ResonanceReport report = resonance_gate(space, config, m);
  std::printf("k^2 = %.6f, i* = %d, margin = %.6f, verdict = %s\n", report.k2, report.i_star,
              report.margin, report.pass ? "pass" : "fail");
  for (int i = 0; i < report.eigenvalues.size(); ++i)
    std::printf("  lambda_%-3d = %.8f%s\n", i + 1, report.eigenvalues[i],
                report.eigenvalues[i] < report.k2 ? "  (< k^2)" : "");
  const std::string csv = out_path(o, "eigs.csv");
  write_eigs_csv(csv, report);
  Manifest manifest;
  manifest.set("experiment", "eigs");
  echo_config(manifest, config, space.kind());
  manifest.set("level", o.level);
  record_gate(manifest, report, "gate");
  manifest.add_output(csv);
  manifest.write(out_path(o, "manifest_eigs.txt"));
  return report.pass ? 0 : 2;
}

int cmd_dispersion(const CommonOpts& o, int n_angles, const std::string& out) {
  ProblemConfig config = to_config(o);
  std::string text = "angle_deg,d\n";
  std::printf("angle_deg,d\n");
  for (int i = 0; i < n_angles; ++i) {
    const double deg = 360.0 * i / n_angles;
    const double rad = deg * M_PI / 180.0;
    const double d = dispersion_solve(config, {std::cos(rad), std::sin(rad)});
    std::printf("%s,%s\n", format_double(deg).c_str(), format_double(d).c_str());
    text += format_double(deg) + "," + format_double(d) + "\n";
  }
  if (!out.empty()) {
    std::ofstream os(out_path(o, out));
    os << text;
  }
  return 0;
}

int cmd_solve(const CommonOpts& o, const std::string& forcing) {
  ProblemConfig config = to_config(o);
  auto mesh = std::make_shared<const TriMesh>(build_unit_square_mesh(o.level));
  const FeSpace space = FeSpace::build(mesh, to_kind(o.element));

  Manifest manifest;
  manifest.set("experiment", "solve");
  echo_config(manifest, config, space.kind());
  manifest.set("level", o.level);
  manifest.set("forcing", forcing);

  const GateResult gate = resonance_gate_full(space, config);
  record_gate(manifest, gate.report, "gate");
  if (!gate.report.pass && !o.override_gate)
    throw std::runtime_error("solve: resonance gate failed (" + gate.report.note +
                             "); rerun with --override-gate to force");

  AssembledSystem sys;
  ManufacturedWave wave;
  if (forcing == "planewave") {
    const Eigen::Vector2d dir(std::cos(0.3), std::sin(0.3));
    wave = manufactured_forcing(config, (dispersion_solve(config, dir) * dir).cast<Complex>().eval());
    sys = assemble_system(space, config, wave.forcing, &wave.exact);
  } else if (forcing == "gaussian") {
    sys = assemble_system(space, config, gaussian_pulse(), nullptr);
  } else {
    sys = assemble_system(space, config, nullptr, nullptr);
  }

  FeFunction fn;
  fn.space = &space;
  fn.coeffs = solve_direct(sys.matrix, sys.rhs);
  const double residual = (sys.matrix * fn.coeffs - sys.rhs).norm() /
                          std::max(sys.rhs.norm(), 1e-300);
  std::printf("solved %d unknowns, relative residual %.2e\n", space.n_dofs(), residual);
  manifest.set("residual", residual);

  if (forcing == "planewave") {
    const Norms err = compute_error_norms(fn, wave.exact, config.norm_weights());
    std::printf("errors: L2 %.6e  H1 %.6e  H2-semi %.6e\n", err.l2, err.h1_semi, err.h2_semi);
    manifest.set("errL2", err.l2);
    manifest.set("errH1", err.h1_semi);
    manifest.set("errH2semi", err.h2_semi);
  }

  const int samples = o.sample > 0 ? o.sample : 101;
  const std::string csv = out_path(o, "solution.csv");
  const std::string vtu = out_path(o, "solution.vtu");
  write_field_csv(csv, fn, samples);
  write_vtu(vtu, fn);
  manifest.add_output(csv);
  manifest.add_output(vtu);
  if (o.dump_matrix) {
    const std::string mtx = out_path(o, "matrix.txt");
    write_matrix_coordinate(mtx, sys.matrix);
    manifest.add_output(mtx);
  }
  if (o.mesh_dump) {
    const std::string mpath = out_path(o, "mesh.txt");
    std::ofstream os(mpath);
    write_mesh_text(*mesh, os);
    manifest.add_output(mpath);
  }
  manifest.write(out_path(o, "manifest_solve.txt"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helkort: C1-conforming solver for the Helmholtz-Korteweg equations"};
  app.require_subcommand(1);

  CommonOpts conv_opts;
  CLI::App* conv = app.add_subcommand("convergence", "manufactured plane-wave convergence study");
  add_common(conv, conv_opts);
  conv->add_option("--levels", conv_opts.levels, "refinement range, e.g. 2:5")
      ->capture_default_str();

  CommonOpts pulse_opts;
  pulse_opts.k = 40.0;
  pulse_opts.beta = 5e-3;
  pulse_opts.bc = "both";
  pulse_opts.level = 5;
  CLI::App* pulse = app.add_subcommand("pulse", "anisotropic Gaussian pulse experiment");
  add_common(pulse, pulse_opts);
  pulse->add_option("--level", pulse_opts.level, "mesh refinement level")->capture_default_str();
  pulse->add_option("--sample", pulse_opts.sample, "field samples per side");

  CommonOpts mls_opts;
  mls_opts.alpha = 1e-4;
  mls_opts.beta = 5e-5;
  mls_opts.k = 40.0;
  mls_opts.level = 6;
  std::string central_director = "y";
  CLI::App* mls = app.add_subcommand("mls", "two-region planar wave experiment");
  add_common(mls, mls_opts);
  mls->add_option("--level", mls_opts.level, "mesh refinement level")->capture_default_str();
  mls->add_option("--sample", mls_opts.sample, "field samples per side");
  mls->add_option("--mls-central-director", central_director,
                  "director of the central strip: x|y")
      ->capture_default_str();

  CommonOpts eig_opts;
  eig_opts.level = 3;
  int eig_count = 20;
  CLI::App* eigs = app.add_subcommand("eigs", "resonance gate report");
  add_common(eigs, eig_opts);
  eigs->add_option("--level", eig_opts.level, "mesh refinement level")->capture_default_str();
  eigs->add_option("--m", eig_count, "eigenpair count")->capture_default_str();

  CommonOpts disp_opts;
  int n_angles = 12;
  std::string disp_out;
  CLI::App* disp = app.add_subcommand("dispersion", "dispersion-relation sweep");
  add_common(disp, disp_opts);
  disp->add_option("--angles", n_angles, "number of sweep angles")->capture_default_str();
  disp->add_option("--out", disp_out, "also write the sweep as CSV");

  CommonOpts solve_opts;
  std::string forcing = "planewave";
  CLI::App* solve = app.add_subcommand("solve", "generic single run");
  add_common(solve, solve_opts);
  solve->add_option("--level", solve_opts.level, "mesh refinement level")->capture_default_str();
  solve->add_option("--sample", solve_opts.sample, "field samples per side");
  solve->add_option("--forcing", forcing, "planewave|gaussian|none")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) return cmd_convergence(conv_opts, conv);
    if (pulse->parsed()) return cmd_pulse(pulse_opts);
    if (mls->parsed()) return cmd_mls(mls_opts, central_director);
    if (eigs->parsed()) return cmd_eigs(eig_opts, eig_count);
    if (disp->parsed()) return cmd_dispersion(disp_opts, n_angles, disp_out);
    if (solve->parsed()) return cmd_solve(solve_opts, forcing);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
