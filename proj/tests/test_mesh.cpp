// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "helkort/mesh.hpp"

using namespace helkort;

namespace {
std::set<std::pair<double, double>> vertex_set(const TriMesh& m) {
  std::set<std::pair<double, double>> s;
  for (const auto& v : m.vertices) s.insert({v.x(), v.y()});
  return s;
}
}  // namespace

TEST_CASE("unit square generator counts") {
  const TriMesh m0 = build_unit_square_mesh(0);
  CHECK(m0.n_triangles() == 2);
  CHECK(m0.n_vertices() == 4);
  CHECK(m0.n_edges() == 5);
  validate(m0);

  const TriMesh m2 = build_unit_square_mesh(2);
  CHECK(m2.n_triangles() == 32);
  CHECK(m2.n_vertices() == 25);
  validate(m2);

  CHECK_THROWS_AS(build_unit_square_mesh(11), std::invalid_argument);
  CHECK_THROWS_AS(build_unit_square_mesh(-1), std::invalid_argument);
}

TEST_CASE("mesh size is the max circumdiameter") {
  // right triangles: circumdiameter equals the hypotenuse
  CHECK(build_unit_square_mesh(1).mesh_size() == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
  const TriMesh m = build_unit_square_mesh(3);
  const TriMesh r = refine_uniform(m);
  CHECK(r.mesh_size() == doctest::Approx(0.5 * m.mesh_size()).epsilon(1e-12));
}

TEST_CASE("area conservation at every level") {
  for (int level = 0; level <= 3; ++level) {
    const TriMesh m = build_unit_square_mesh(level);
    double area = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) area += m.triangle_area(t);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("uniform refinement") {
  TriMesh m = build_unit_square_mesh(0);
  m.region_tags = {0, 1};
  const TriMesh r = refine_uniform(m);
  CHECK(r.n_triangles() == 8);
  validate(r);

  // children inherit the parent's tag
  for (int c = 0; c < 4; ++c) CHECK(r.region_tags[c] == 0);
  for (int c = 4; c < 8; ++c) CHECK(r.region_tags[c] == 1);

  // parent vertices keep positions and indices
  for (int v = 0; v < m.n_vertices(); ++v) CHECK((r.vertices[v] - m.vertices[v]).norm() == 0.0);
}

TEST_CASE("refinement nesting matches the next generator level") {
  for (int level = 0; level <= 2; ++level) {
    const TriMesh coarse = build_unit_square_mesh(level);
    const TriMesh fine = build_unit_square_mesh(level + 1);
    const TriMesh refined = refine_uniform(coarse);
    CHECK(refined.n_vertices() == fine.n_vertices());
    CHECK(vertex_set(refined) == vertex_set(fine));
    // nesting: coarse vertices are a subset of fine vertices
    const auto fine_set = vertex_set(fine);
    for (const auto& v : coarse.vertices) CHECK(fine_set.count({v.x(), v.y()}) == 1);
  }
}

TEST_CASE("alfeld split") {
  const TriMesh m = build_unit_square_mesh(0);
  const AlfeldSplit split = alfeld_split(m);
  CHECK(split.mesh.n_triangles() == 6);
  CHECK(split.mesh.n_vertices() == m.n_vertices() + 2);
  validate(split.mesh);

  // subtriangle areas of each parent sum to the parent area
  for (int t = 0; t < m.n_triangles(); ++t) {
    double sum = 0.0;
    for (int c = 0; c < split.mesh.n_triangles(); ++c)
      if (split.parent[c] == t) sum += split.mesh.triangle_area(c);
    CHECK(sum == doctest::Approx(m.triangle_area(t)).epsilon(1e-13));
  }

  // parent map is surjective
  std::set<int> parents(split.parent.begin(), split.parent.end());
  CHECK(static_cast<int>(parents.size()) == m.n_triangles());
}

TEST_CASE("boundary normals") {
  const TriMesh m = build_unit_square_mesh(2);
  const Eigen::Vector2d expected[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  for (size_t f = 0; f < m.boundary_facets.size(); ++f) {
    const Eigen::Vector2d n = m.boundary_normal(static_cast<int>(f));
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const int tag = m.boundary_facets[f].side_tag;
    REQUIRE(tag >= 0);
    CHECK((n - expected[tag]).norm() < 1e-14);
  }
  CHECK_THROWS_AS(m.boundary_normal(static_cast<int>(m.boundary_facets.size())),
                  std::out_of_range);
}

TEST_CASE("interior edges are traversed with opposite signs") {
  const TriMesh m = build_unit_square_mesh(2);
  std::vector<int> sum(m.n_edges(), 0), count(m.n_edges(), 0);
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int i = 0; i < 3; ++i) {
      sum[m.triangle_edges[t][i]] += m.triangle_edge_signs[t][i];
      count[m.triangle_edges[t][i]] += 1;
    }
  for (int e = 0; e < m.n_edges(); ++e)
    if (count[e] == 2) CHECK(sum[e] == 0);
}

TEST_CASE("plain text dump") {
  const TriMesh m = build_unit_square_mesh(0);
  std::ostringstream os;
  write_mesh_text(m, os);
  std::istringstream is(os.str());
  std::string word;
  int n = 0, t = 0;
  is >> word >> n >> word >> t;
  CHECK(n == 4);
  CHECK(t == 2);
  double x, y;
  for (int i = 0; i < n; ++i) CHECK((is >> x >> y).good());
  int a, b, c, tag;
  for (int i = 0; i < t; ++i) {
    is >> a >> b >> c >> tag;
    CHECK(a >= 0);
    CHECK(c < n);
  }
}
