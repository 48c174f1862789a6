#ifndef DGOPT_GEOMETRY_HPP
#define DGOPT_GEOMETRY_HPP

#include <cmath>

namespace dgopt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Counter-clockwise rotation by 90 degrees.
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

} // namespace dgopt

#endif
