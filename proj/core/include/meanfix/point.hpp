#pragma once

#include <cmath>

namespace meanfix {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 &operator+=(const Point2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2 &operator-=(const Point2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Point2 operator+(Point2 a, const Point2 &b) { return a += b; }
  friend constexpr Point2 operator-(Point2 a, const Point2 &b) { return a -= b; }
  friend constexpr Point2 operator*(Point2 a, double s) { return a *= s; }
  friend constexpr Point2 operator*(double s, Point2 a) { return a *= s; }
  friend constexpr Point2 operator-(const Point2 &a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(const Point2 &, const Point2 &) = default;
};

inline double dot(const Point2 &a, const Point2 &b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Point2 &a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2 &a, const Point2 &b) { return norm(a - b); }

} // namespace meanfix
