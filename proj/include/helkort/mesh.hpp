// SPDX-FileCopyrightText: Copyright (c) 2025 The helkort authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <vector>

namespace helkort {

/// An oriented mesh edge lying on the domain boundary.
struct BoundaryFacet {
  int edge = -1;      ///< global edge index
  int triangle = -1;  ///< the unique adjacent triangle
  int side_tag = -1;  ///< generator label (unit square: 0 bottom, 1 right, 2 top, 3 left)
};

/// Conforming triangulation of a polygon with globally oriented edges.
///
/// Edges are stored lower-vertex-index first; this single convention fixes the
/// tangent/normal of every edge independently of which triangle looks at it,
/// so edge-based degrees of freedom can be shared without sign bookkeeping.
/// Immutable after construction; safe to share read-only across threads.
struct TriMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< counterclockwise vertex triples
  std::vector<std::array<int, 2>> edges;      ///< lower vertex index first
  /// triangle_edges[t][i] is the global edge opposite local vertex i.
  std::vector<std::array<int, 3>> triangle_edges;
  /// +1 if the triangle traverses the edge in its global direction, -1 otherwise.
  std::vector<std::array<int, 3>> triangle_edge_signs;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<int> region_tags;  ///< per-triangle label, drives piecewise data

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  double triangle_area(int t) const;
  Eigen::Vector2d triangle_barycenter(int t) const;
  /// Diameter of the circumscribed circle.
  double circumdiameter(int t) const;
  /// Mesh size h: the largest circumdiameter.
  double mesh_size() const;

  double edge_length(int e) const;
  Eigen::Vector2d edge_midpoint(int e) const;
  /// Unit tangent from the lower-index to the higher-index vertex.
  Eigen::Vector2d edge_tangent(int e) const;
  /// Unit normal obtained by rotating the tangent clockwise; global per edge.
  Eigen::Vector2d edge_normal(int e) const;

  double facet_length(int f) const { return edge_length(boundary_facets[f].edge); }
  /// Outward unit normal of a boundary facet. Throws if f is out of range.
  Eigen::Vector2d boundary_normal(int f) const;
};

/// Crisscross triangulation of [0,1]^2 with 2^level x 2^level cells, each cell
/// split along its lower-left/upper-right diagonal. level must be <= 10.
TriMesh build_unit_square_mesh(int level);

/// Splits every triangle into four via edge midpoints. Parent vertices keep
/// their indices; region tags are inherited.
TriMesh refine_uniform(const TriMesh& mesh);

struct AlfeldSplit {
  TriMesh mesh;
  std::vector<int> parent;  ///< subtriangle -> originating macro triangle
};

/// Splits every triangle into three at its barycenter.
AlfeldSplit alfeld_split(const TriMesh& mesh);

/// Checks all structural invariants (positive areas, edge incidence counts,
/// orientation consistency); throws std::runtime_error on the first violation.
void validate(const TriMesh& mesh);

/// Plain-text dump: "vertices N triangles M" header, coordinate rows, then
/// vertex-index rows with the region tag appended.
void write_mesh_text(const TriMesh& mesh, std::ostream& os);

}  // namespace helkort
