#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace czt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

using Point = Vec2;

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
constexpr double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double distance(Point a, Point b) { return norm(a - b); }
// Counterclockwise rotation by 90 degrees.
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 normalized(Vec2 v) { return v / norm(v); }

// Closed axis-aligned rectangle.
struct Box {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  constexpr Box() = default;
  constexpr Box(Point lo_, Point hi_) : lo(lo_), hi(hi_) {}

  bool empty() const { return !(lo.x <= hi.x && lo.y <= hi.y); }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  Point center() const { return (lo + hi) * 0.5; }
  void expand(Point p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  void expand(const Box& b) {
    expand(b.lo);
    expand(b.hi);
  }
  Box inflated(double margin) const {
    return {{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}};
  }
  bool contains(Point p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
  bool intersects(const Box& b) const {
    return lo.x <= b.hi.x && b.lo.x <= hi.x && lo.y <= b.hi.y && b.lo.y <= hi.y;
  }
  // Euclidean distance from p to the rectangle (0 inside).
  double distance_to(Point p) const {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
  }
  // Largest distance from p to a point of the rectangle.
  double max_distance_to(Point p) const {
    const double dx = std::max(std::abs(p.x - lo.x), std::abs(p.x - hi.x));
    const double dy = std::max(std::abs(p.y - lo.y), std::abs(p.y - hi.y));
    return std::hypot(dx, dy);
  }
  // Distance between two rectangles (0 when they intersect).
  double distance_to(const Box& b) const {
    const double dx = std::max({lo.x - b.hi.x, 0.0, b.lo.x - hi.x});
    const double dy = std::max({lo.y - b.hi.y, 0.0, b.lo.y - hi.y});
    return std::hypot(dx, dy);
  }
};

// Distance from p to the segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

// Distance between segment [a, b] and a closed rectangle.
double segment_box_distance(Point a, Point b, const Box& box);

// Proper or touching intersection of segments [a,b] and [c,d].
bool segments_intersect(Point a, Point b, Point c, Point d);

}  // namespace czt
