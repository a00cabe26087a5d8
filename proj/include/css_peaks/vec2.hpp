#pragma once

#include <cmath>

namespace css {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr double operator[](int k) const { return k == 0 ? x1 : x2; }
  constexpr double& operator[](int k) { return k == 0 ? x1 : x2; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x1, s * a.x2}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

}  // namespace css
