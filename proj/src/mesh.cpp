// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#include "helkort/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace helkort {

namespace {

// Builds the edge list, triangle->edge incidence and boundary facets from the
// vertex/triangle arrays. Boundary side tags are resolved via the callback
// (may return -1 when unknown).
template <typename TagFn>
void finalize_topology(TriMesh& m, TagFn&& side_tag) {
  std::map<std::pair<int, int>, int> edge_index;
  m.edges.clear();
  m.triangle_edges.assign(m.triangles.size(), {-1, -1, -1});
  m.triangle_edge_signs.assign(m.triangles.size(), {0, 0, 0});
  std::vector<int> incidence_count;
  std::vector<int> incident_tri;

  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, m.n_edges());
      if (inserted) {
        m.edges.push_back({key.first, key.second});
        incidence_count.push_back(0);
        incident_tri.push_back(t);
      }
      const int e = it->second;
      m.triangle_edges[t][i] = e;
      m.triangle_edge_signs[t][i] = (a == key.first) ? 1 : -1;
      incidence_count[e] += 1;
      incident_tri[e] = (incidence_count[e] == 1) ? t : incident_tri[e];
    }
  }

  m.boundary_facets.clear();
  for (int e = 0; e < m.n_edges(); ++e) {
    if (incidence_count[e] == 1) {
      BoundaryFacet f;
      f.edge = e;
      f.triangle = incident_tri[e];
      f.side_tag = side_tag(m.edges[e][0], m.edges[e][1]);
      m.boundary_facets.push_back(f);
    }
  }
}

}  // namespace

double TriMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d ab = vertices[tri[1]] - vertices[tri[0]];
  const Eigen::Vector2d ac = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (ab.x() * ac.y() - ab.y() * ac.x());
}

Eigen::Vector2d TriMesh::triangle_barycenter(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double TriMesh::circumdiameter(int t) const {
  const auto& tri = triangles[t];
  const double a = (vertices[tri[1]] - vertices[tri[2]]).norm();
  const double b = (vertices[tri[2]] - vertices[tri[0]]).norm();
  const double c = (vertices[tri[0]] - vertices[tri[1]]).norm();
  return a * b * c / (2.0 * std::abs(triangle_area(t)));
}

double TriMesh::mesh_size() const {
  double h = 0.0;
  for (int t = 0; t < n_triangles(); ++t) h = std::max(h, circumdiameter(t));
  return h;
}

double TriMesh::edge_length(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).norm();
}

Eigen::Vector2d TriMesh::edge_midpoint(int e) const {
  return 0.5 * (vertices[edges[e][0]] + vertices[edges[e][1]]);
}

Eigen::Vector2d TriMesh::edge_tangent(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).normalized();
}

Eigen::Vector2d TriMesh::edge_normal(int e) const {
  const Eigen::Vector2d t = edge_tangent(e);
  return {t.y(), -t.x()};
}

Eigen::Vector2d TriMesh::boundary_normal(int f) const {
  if (f < 0 || f >= static_cast<int>(boundary_facets.size()))
    throw std::out_of_range("boundary_normal: facet index not on boundary");
  const BoundaryFacet& facet = boundary_facets[f];
  Eigen::Vector2d n = edge_normal(facet.edge);
  const Eigen::Vector2d out = edge_midpoint(facet.edge) - triangle_barycenter(facet.triangle);
  if (n.dot(out) < 0.0) n = -n;
  return n;
}

TriMesh build_unit_square_mesh(int level) {
  if (level < 0 || level > 10)
    throw std::invalid_argument("build_unit_square_mesh: level must be in [0,10]");
  const int n = 1 << level;
  TriMesh m;
  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int p00 = vid(i, j), p10 = vid(i + 1, j);
      const int p01 = vid(i, j + 1), p11 = vid(i + 1, j + 1);
      m.triangles.push_back({p00, p10, p11});
      m.triangles.push_back({p00, p11, p01});
    }
  }
  m.region_tags.assign(m.triangles.size(), 0);

  auto side_of = [&m](int a, int b) {
    const Eigen::Vector2d pa = m.vertices[a], pb = m.vertices[b];
    if (pa.y() == 0.0 && pb.y() == 0.0) return 0;
    if (pa.x() == 1.0 && pb.x() == 1.0) return 1;
    if (pa.y() == 1.0 && pb.y() == 1.0) return 2;
    if (pa.x() == 0.0 && pb.x() == 0.0) return 3;
    return -1;
  };
  finalize_topology(m, side_of);
  return m;
}

TriMesh refine_uniform(const TriMesh& mesh) {
  TriMesh m;
  m.vertices = mesh.vertices;
  m.vertices.reserve(mesh.vertices.size() + mesh.edges.size());
  for (int e = 0; e < mesh.n_edges(); ++e)
    m.vertices.push_back(0.5 * (mesh.vertices[mesh.edges[e][0]] + mesh.vertices[mesh.edges[e][1]]));

  auto mid = [&mesh](int e) { return mesh.n_vertices() + e; };
  m.triangles.reserve(4 * mesh.n_triangles());
  m.region_tags.reserve(4 * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int ma = mid(mesh.triangle_edges[t][0]);
    const int mb = mid(mesh.triangle_edges[t][1]);
    const int mc = mid(mesh.triangle_edges[t][2]);
    m.triangles.push_back({tri[0], mc, mb});
    m.triangles.push_back({tri[1], ma, mc});
    m.triangles.push_back({tri[2], mb, ma});
    m.triangles.push_back({ma, mb, mc});
    for (int c = 0; c < 4; ++c) m.region_tags.push_back(mesh.region_tags[t]);
  }

  // Child boundary edges inherit the tag of the parent facet they subdivide.
  std::map<std::pair<int, int>, int> tag_of;
  for (const BoundaryFacet& f : mesh.boundary_facets) {
    const int a = mesh.edges[f.edge][0], b = mesh.edges[f.edge][1], c = mid(f.edge);
    tag_of[{std::min(a, c), std::max(a, c)}] = f.side_tag;
    tag_of[{std::min(b, c), std::max(b, c)}] = f.side_tag;
  }
  finalize_topology(m, [&tag_of](int a, int b) {
    auto it = tag_of.find({a, b});
    return it == tag_of.end() ? -1 : it->second;
  });
  return m;
}

AlfeldSplit alfeld_split(const TriMesh& mesh) {
  AlfeldSplit out;
  TriMesh& m = out.mesh;
  m.vertices = mesh.vertices;
  m.vertices.reserve(mesh.vertices.size() + mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) m.vertices.push_back(mesh.triangle_barycenter(t));

  m.triangles.reserve(3 * mesh.n_triangles());
  out.parent.reserve(3 * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int z = mesh.n_vertices() + t;
    for (int i = 0; i < 3; ++i) {
      m.triangles.push_back({tri[(i + 1) % 3], tri[(i + 2) % 3], z});
      m.region_tags.push_back(mesh.region_tags[t]);
      out.parent.push_back(t);
    }
  }

  // Original vertices keep their indices, so boundary tags transfer by pair.
  std::map<std::pair<int, int>, int> tag_of;
  for (const BoundaryFacet& f : mesh.boundary_facets)
    tag_of[{mesh.edges[f.edge][0], mesh.edges[f.edge][1]}] = f.side_tag;
  finalize_topology(m, [&tag_of](int a, int b) {
    auto it = tag_of.find({a, b});
    return it == tag_of.end() ? -1 : it->second;
  });
  return out;
}

void validate(const TriMesh& mesh) {
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (!(mesh.triangle_area(t) > 0.0))
      throw std::runtime_error("mesh: triangle " + std::to_string(t) + " has nonpositive area");

  std::vector<int> count(mesh.n_edges(), 0);
  std::vector<int> sign_sum(mesh.n_edges(), 0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      count[mesh.triangle_edges[t][i]] += 1;
      sign_sum[mesh.triangle_edges[t][i]] += mesh.triangle_edge_signs[t][i];
    }
  }
  std::vector<char> is_boundary(mesh.n_edges(), 0);
  for (const BoundaryFacet& f : mesh.boundary_facets) is_boundary[f.edge] = 1;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const int expected = is_boundary[e] ? 1 : 2;
    if (count[e] != expected)
      throw std::runtime_error("mesh: edge " + std::to_string(e) + " has incidence " +
                               std::to_string(count[e]) + ", expected " + std::to_string(expected));
    if (!is_boundary[e] && sign_sum[e] != 0)
      throw std::runtime_error("mesh: interior edge " + std::to_string(e) +
                               " traversed with identical orientation by both triangles");
  }
}

void write_mesh_text(const TriMesh& mesh, std::ostream& os) {
  os << "vertices " << mesh.n_vertices() << " triangles " << mesh.n_triangles() << "\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) os << v.x() << " " << v.y() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << tri[0] << " " << tri[1] << " " << tri[2] << " " << mesh.region_tags[t] << "\n";
  }
}

}  // namespace helkort
