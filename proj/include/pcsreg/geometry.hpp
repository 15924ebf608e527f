#pragma once

#include <cmath>

namespace pcsreg {

// Minimum separation between two centroids, meters.
inline constexpr double kPositionEpsilon = 1e-6;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Quarter turns are exact component swaps so that derived axes stay
// exactly orthogonal.
constexpr Vec2 rotate_cw90(Vec2 a) { return {a.y, -a.x}; }
constexpr Vec2 rotate_ccw90(Vec2 a) { return {-a.y, a.x}; }

constexpr Vec2 rotate_quarter_turns(Vec2 a, int turns) {
  turns = ((turns % 4) + 4) % 4;
  for (int i = 0; i < turns; ++i) a = rotate_ccw90(a);
  return a;
}

inline Vec2 rotate(Vec2 a, double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Components below 1e-12 are snapped to zero so cardinal headings produce
// exact axes (cos(pi/2) is not 0 in floating point).
inline Vec2 heading_vector(double radians) {
  Vec2 v{std::cos(radians), std::sin(radians)};
  if (std::abs(v.x) < 1e-12) v = {0.0, v.y < 0 ? -1.0 : 1.0};
  if (std::abs(v.y) < 1e-12) v = {v.x < 0 ? -1.0 : 1.0, 0.0};
  return v;
}

struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace pcsreg
