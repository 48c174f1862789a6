#ifndef DGOPT_MESH_HPP
#define DGOPT_MESH_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "dgopt/geometry.hpp"

namespace dgopt {

/// One mesh edge. The normal is the unit normal of the owner element on this
/// edge; it points into the neighbor element, or out of the domain for
/// boundary edges.
struct Edge {
  std::array<int, 2> verts{-1, -1};
  int owner = -1;
  int neighbor = -1; // -1 on the boundary
  Vec2 normal;
  double length = 0.0;

  bool is_boundary() const { return neighbor < 0; }
};

/// Conforming triangulation of the unit square. Immutable after construction,
/// so instances can be shared freely between threads.
class Mesh {
public:
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Vec2 vertex(int v) const { return vertices_[static_cast<size_t>(v)]; }
  const std::array<int, 3>& triangle(int k) const { return triangles_[static_cast<size_t>(k)]; }
  const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }

  /// Indices of the three edges of element k, in local edge order
  /// (local edge i connects triangle vertices i and i+1 mod 3).
  const std::array<int, 3>& element_edges(int k) const { return element_edges_[static_cast<size_t>(k)]; }

  double element_area(int k) const { return areas_[static_cast<size_t>(k)]; }
  double element_diameter(int k) const { return diameters_[static_cast<size_t>(k)]; }

  /// Largest element diameter.
  double mesh_size() const { return mesh_size_; }

  /// Subdivisions per side used to build the mesh.
  int subdivisions() const { return subdivisions_; }

  /// Outward unit normal of element k on local edge slot.
  Vec2 element_edge_normal(int k, int slot) const;

  /// Plain-text dump: "v x y" lines followed by "t i j k" lines.
  void dump(std::ostream& out) const;

  friend Mesh build_uniform_mesh(int n);

private:
  Mesh() = default;

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  double mesh_size_ = 0.0;
  int subdivisions_ = 0;
};

/// Structured criss-cross triangulation of the unit square: n x n grid squares,
/// each split along the diagonal from its lower-left to its upper-right corner.
/// All triangles are congruent, so h = sqrt(2)/n.
/// Throws std::invalid_argument for n < 1.
Mesh build_uniform_mesh(int n);

/// Inflow/outflow labels with respect to a velocity field, evaluated at edge
/// midpoints. Strict inequality beta.n < 0 defines inflow; ties count as
/// outflow.
struct EdgeClassification {
  /// element_edge_inflow[3*k + slot]: local edge slot of element k lies in
  /// the inflow part of that element's boundary.
  std::vector<bool> element_edge_inflow;
  /// boundary_inflow[e]: edge e is a boundary edge on the inflow boundary.
  /// Always false for interior edges.
  std::vector<bool> boundary_inflow;

  bool element_inflow(int k, int slot) const { return element_edge_inflow[static_cast<size_t>(3 * k + slot)]; }
};

EdgeClassification classify_edges(const Mesh& mesh, const std::function<Vec2(Vec2)>& beta);
EdgeClassification classify_edges(const Mesh& mesh, Vec2 beta);

} // namespace dgopt

#endif
