#include "dgopt/quadrature.hpp"

#include <array>
#include <cmath>

namespace dgopt {

TriangleRule TriangleRule::degree4() {
  // Strang-Fix 6-point rule: two symmetric orbits.
  const double w1 = 0.223381589678011, a1 = 0.445948490915965;
  const double w2 = 0.109951743655322, a2 = 0.091576213509771;
  const double b1 = 1.0 - 2.0 * a1;
  const double b2 = 1.0 - 2.0 * a2;
  TriangleRule rule;
  rule.points = {
      {b1, a1, a1, w1}, {a1, b1, a1, w1}, {a1, a1, b1, w1},
      {b2, a2, a2, w2}, {a2, b2, a2, w2}, {a2, a2, b2, w2},
  };
  return rule;
}

TriangleRule TriangleRule::degree4_refined() {
  const TriangleRule base = degree4();
  // Corners of the four midpoint subtriangles, as barycentric coordinates of
  // the parent triangle.
  using B = std::array<double, 3>;
  const B v0{1, 0, 0}, v1{0, 1, 0}, v2{0, 0, 1};
  const B m01{0.5, 0.5, 0}, m12{0, 0.5, 0.5}, m20{0.5, 0, 0.5};
  const std::array<std::array<B, 3>, 4> subs = {{
      {v0, m01, m20},
      {m01, v1, m12},
      {m20, m12, v2},
      {m01, m12, m20},
  }};

  TriangleRule rule;
  rule.points.reserve(4 * base.points.size());
  for (const auto& sub : subs) {
    for (const TrianglePoint& p : base.points) {
      TrianglePoint q;
      q.l0 = p.l0 * sub[0][0] + p.l1 * sub[1][0] + p.l2 * sub[2][0];
      q.l1 = p.l0 * sub[0][1] + p.l1 * sub[1][1] + p.l2 * sub[2][1];
      q.l2 = p.l0 * sub[0][2] + p.l1 * sub[1][2] + p.l2 * sub[2][2];
      q.weight = 0.25 * p.weight;
      rule.points.push_back(q);
    }
  }
  return rule;
}

SegmentRule SegmentRule::gauss3() {
  const double g = 0.5 * std::sqrt(0.6); // sqrt(3/5)/2
  SegmentRule rule;
  rule.points = {
      {0.5 - g, 5.0 / 18.0},
      {0.5, 8.0 / 18.0},
      {0.5 + g, 5.0 / 18.0},
  };
  return rule;
}

} // namespace dgopt
