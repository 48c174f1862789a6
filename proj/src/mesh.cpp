#include "dgopt/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace dgopt {

Vec2 Mesh::element_edge_normal(int k, int slot) const {
  const Edge& e = edges_[static_cast<size_t>(element_edges_[static_cast<size_t>(k)][static_cast<size_t>(slot)])];
  if (e.owner == k) return e.normal;
  return {-e.normal.x, -e.normal.y};
}

void Mesh::dump(std::ostream& out) const {
  for (const Vec2& v : vertices_) out << "v " << v.x << ' ' << v.y << '\n';
  for (const auto& t : triangles_) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh build_uniform_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_mesh: subdivision count must be at least 1");

  Mesh mesh;
  mesh.subdivisions_ = n;

  const int nv = n + 1;
  mesh.vertices_.reserve(static_cast<size_t>(nv) * nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nv; ++i)
      mesh.vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [nv](int i, int j) { return j * nv + i; };

  mesh.triangles_.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles_.push_back({a, b, c}); // below the diagonal a-c
      mesh.triangles_.push_back({a, c, d}); // above the diagonal a-c
    }
  }

  const int num_tri = mesh.num_triangles();
  mesh.element_edges_.assign(static_cast<size_t>(num_tri), {-1, -1, -1});
  mesh.areas_.resize(static_cast<size_t>(num_tri));
  // All triangles of the criss-cross family are congruent right triangles
  // with legs 1/n, so the diameter is the diagonal length.
  const double diameter = std::sqrt(2.0) / n;
  mesh.diameters_.assign(static_cast<size_t>(num_tri), diameter);
  mesh.mesh_size_ = diameter;

  std::map<std::pair<int, int>, int> edge_of; // sorted vertex pair -> edge index
  for (int k = 0; k < num_tri; ++k) {
    const auto& tri = mesh.triangles_[static_cast<size_t>(k)];
    const Vec2 p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]), p2 = mesh.vertex(tri[2]);
    mesh.areas_[static_cast<size_t>(k)] = 0.5 * cross(p1 - p0, p2 - p0);

    for (int slot = 0; slot < 3; ++slot) {
      const int va = tri[static_cast<size_t>(slot)];
      const int vb = tri[static_cast<size_t>((slot + 1) % 3)];
      const auto key = std::minmax(va, vb);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.verts = {va, vb};
        e.owner = k;
        const Vec2 a = mesh.vertex(va), b = mesh.vertex(vb);
        e.length = norm(b - a);
        // Vertices are traversed counter-clockwise, so the outward normal of
        // the owner is the edge tangent rotated clockwise.
        const Vec2 t = (1.0 / e.length) * (b - a);
        e.normal = {t.y, -t.x};
        const int id = mesh.num_edges();
        mesh.edges_.push_back(e);
        edge_of.emplace(key, id);
        mesh.element_edges_[static_cast<size_t>(k)][static_cast<size_t>(slot)] = id;
      } else {
        mesh.edges_[static_cast<size_t>(it->second)].neighbor = k;
        mesh.element_edges_[static_cast<size_t>(k)][static_cast<size_t>(slot)] = it->second;
      }
    }
  }
  return mesh;
}

EdgeClassification classify_edges(const Mesh& mesh, const std::function<Vec2(Vec2)>& beta) {
  EdgeClassification cls;
  cls.element_edge_inflow.assign(static_cast<size_t>(3) * mesh.num_triangles(), false);
  cls.boundary_inflow.assign(static_cast<size_t>(mesh.num_edges()), false);

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int slot = 0; slot < 3; ++slot) {
      const Edge& e = mesh.edge(mesh.element_edges(k)[static_cast<size_t>(slot)]);
      const Vec2 a = mesh.vertex(e.verts[0]), b = mesh.vertex(e.verts[1]);
      const Vec2 mid = 0.5 * (a + b);
      const Vec2 n = mesh.element_edge_normal(k, slot);
      const bool inflow = dot(beta(mid), n) < 0.0;
      cls.element_edge_inflow[static_cast<size_t>(3 * k + slot)] = inflow;
      if (e.is_boundary() && inflow) cls.boundary_inflow[static_cast<size_t>(mesh.element_edges(k)[static_cast<size_t>(slot)])] = true;
    }
  }
  return cls;
}

EdgeClassification classify_edges(const Mesh& mesh, Vec2 beta) {
  return classify_edges(mesh, [beta](Vec2) { return beta; });
}

} // namespace dgopt
