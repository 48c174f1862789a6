#include "dgopt/dg_space.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dgopt {

DgSpace::DgSpace(const Mesh& mesh)
    : mesh_(&mesh),
      volume_rule_(TriangleRule::degree4()),
      error_rule_(TriangleRule::degree4_refined()),
      edge_rule_(SegmentRule::gauss3()) {}

std::array<double, 3> DgSpace::barycentric(int element, Vec2 p) const {
  const auto& tri = mesh_->triangle(element);
  const Vec2 a = mesh_->vertex(tri[0]), b = mesh_->vertex(tri[1]), c = mesh_->vertex(tri[2]);
  const double inv2s = 1.0 / cross(b - a, c - a);
  const double l1 = cross(p - a, c - a) * inv2s;
  const double l2 = cross(b - a, p - a) * inv2s;
  return {1.0 - l1 - l2, l1, l2};
}

std::array<Vec2, 3> DgSpace::basis_gradients(int element) const {
  const auto& tri = mesh_->triangle(element);
  const Vec2 a = mesh_->vertex(tri[0]), b = mesh_->vertex(tri[1]), c = mesh_->vertex(tri[2]);
  const double inv2s = 1.0 / cross(b - a, c - a);
  return {inv2s * rot90(c - b), inv2s * rot90(a - c), inv2s * rot90(b - a)};
}

double DgSpace::evaluate(const CoefficientVector& v, int element, Vec2 p) const {
  const auto l = barycentric(element, p);
  constexpr double tol = 1e-12;
  for (double li : l)
    if (li < -tol || li > 1.0 + tol) throw std::domain_error("DgSpace::evaluate: point outside element");
  return l[0] * v[dof(element, 0)] + l[1] * v[dof(element, 1)] + l[2] * v[dof(element, 2)];
}

CoefficientVector DgSpace::project(const ScalarField& g, double t) const {
  CoefficientVector result(ndof());
  for (int k = 0; k < mesh_->num_triangles(); ++k) {
    const auto& tri = mesh_->triangle(k);
    const Vec2 a = mesh_->vertex(tri[0]), b = mesh_->vertex(tri[1]), c = mesh_->vertex(tri[2]);
    const double area = mesh_->element_area(k);

    Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (const TrianglePoint& q : volume_rule_.points) {
      const Vec2 x = q.l0 * a + q.l1 * b + q.l2 * c;
      const double w = q.weight * area;
      const double phi[3] = {q.l0, q.l1, q.l2};
      const double gval = g(x, t);
      for (int i = 0; i < 3; ++i) {
        rhs[i] += w * phi[i] * gval;
        for (int j = 0; j < 3; ++j) mass(i, j) += w * phi[i] * phi[j];
      }
    }
    const Eigen::Vector3d coeffs = mass.ldlt().solve(rhs);
    for (int i = 0; i < 3; ++i) result[dof(k, i)] = coeffs[i];
  }
  return result;
}

CoefficientVector DgSpace::project(const std::function<double(Vec2)>& g) const {
  return project([&g](Vec2 x, double) { return g(x); }, 0.0);
}

double DgSpace::l2_error(const CoefficientVector& v, const ScalarField& g, double t) const {
  double total = 0.0;
  for (int k = 0; k < mesh_->num_triangles(); ++k) {
    const auto& tri = mesh_->triangle(k);
    const Vec2 a = mesh_->vertex(tri[0]), b = mesh_->vertex(tri[1]), c = mesh_->vertex(tri[2]);
    const double area = mesh_->element_area(k);
    const double c0 = v[dof(k, 0)], c1 = v[dof(k, 1)], c2 = v[dof(k, 2)];
    for (const TrianglePoint& q : error_rule_.points) {
      const Vec2 x = q.l0 * a + q.l1 * b + q.l2 * c;
      const double diff = c0 * q.l0 + c1 * q.l1 + c2 * q.l2 - g(x, t);
      total += q.weight * area * diff * diff;
    }
  }
  return std::sqrt(total);
}

double l2_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& mass, const CoefficientVector& v) {
  if (mass.rows() != v.size() || mass.cols() != v.size())
    throw std::invalid_argument("l2_norm: dimension mismatch between mass matrix and vector");
  return std::sqrt(v.dot(mass * v));
}

void export_field(const DgSpace& space, const CoefficientVector& v, std::ostream& out) {
  out << "element,vertex,value\n";
  for (int k = 0; k < space.mesh().num_triangles(); ++k) {
    const auto& tri = space.mesh().triangle(k);
    for (int i = 0; i < 3; ++i) out << k << ',' << tri[static_cast<size_t>(i)] << ',' << v[space.dof(k, i)] << '\n';
  }
}

} // namespace dgopt
