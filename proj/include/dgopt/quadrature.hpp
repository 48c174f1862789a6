#ifndef DGOPT_QUADRATURE_HPP
#define DGOPT_QUADRATURE_HPP

#include <vector>

namespace dgopt {

/// Quadrature point on the reference triangle in barycentric coordinates.
/// Weights sum to one; multiply by the element area when integrating.
struct TrianglePoint {
  double l0, l1, l2;
  double weight;
};

struct TriangleRule {
  std::vector<TrianglePoint> points;

  /// Symmetric 6-point rule, exact for polynomials of degree 4.
  static TriangleRule degree4();

  /// degree4() applied on the four congruent midpoint subtriangles.
  /// Used for error norms against closed-form solutions, where extra points
  /// help with sharp layers.
  static TriangleRule degree4_refined();
};

/// Gauss point on the unit interval [0,1]; weights sum to one.
struct SegmentPoint {
  double s;
  double weight;
};

struct SegmentRule {
  std::vector<SegmentPoint> points;

  /// 3-point Gauss rule, exact for polynomials of degree 5.
  static SegmentRule gauss3();
};

} // namespace dgopt

#endif
