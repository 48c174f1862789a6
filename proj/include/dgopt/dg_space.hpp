#ifndef DGOPT_DG_SPACE_HPP
#define DGOPT_DG_SPACE_HPP

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>

#include "dgopt/mesh.hpp"
#include "dgopt/quadrature.hpp"

namespace dgopt {

/// Scalar data function of space and time.
using ScalarField = std::function<double(Vec2, double)>;

using CoefficientVector = Eigen::VectorXd;

/// Elementwise-linear discontinuous space: three degrees of freedom per
/// triangle, holding the values at the triangle's vertices. Immutable; all
/// member functions are const and thread-safe.
class DgSpace {
public:
  static constexpr int dofs_per_cell = 3;

  explicit DgSpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  int ndof() const { return dofs_per_cell * mesh_->num_triangles(); }
  int dof(int element, int local) const { return dofs_per_cell * element + local; }

  const TriangleRule& volume_rule() const { return volume_rule_; }
  const SegmentRule& edge_rule() const { return edge_rule_; }

  /// Barycentric coordinates of a point with respect to an element.
  std::array<double, 3> barycentric(int element, Vec2 p) const;

  /// Constant gradients of the three nodal basis functions on an element.
  std::array<Vec2, 3> basis_gradients(int element) const;

  /// Value of the discrete function at a point of the closed element.
  /// Throws std::domain_error if the point lies outside.
  double evaluate(const CoefficientVector& v, int element, Vec2 p) const;

  /// Elementwise L2 projection, using the volume quadrature rule.
  CoefficientVector project(const ScalarField& g, double t) const;
  CoefficientVector project(const std::function<double(Vec2)>& g) const;

  /// Spatial L2 distance between a discrete function and a closed form,
  /// integrated with the refined quadrature rule.
  double l2_error(const CoefficientVector& v, const ScalarField& g, double t) const;

private:
  const Mesh* mesh_;
  TriangleRule volume_rule_;
  TriangleRule error_rule_;
  SegmentRule edge_rule_;
};

/// sqrt(v' M v) for a mass matrix assembled on the same space.
/// Throws std::invalid_argument on dimension mismatch.
double l2_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& mass, const CoefficientVector& v);

/// CSV field export, one line "element,vertex,value" per degree of freedom.
void export_field(const DgSpace& space, const CoefficientVector& v, std::ostream& out);

} // namespace dgopt

#endif
